use omr_core::modring::{
    mod_mul, negacyclic_mul, ntt_forward, ntt_inverse, ntt_primes, poly_add_mod, CoeffVector, Domain, Modulus,
    NttTables,
};
use omr_core::oracle::{negacyclic_dft, schoolbook_negacyclic};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tables(n: usize, bits: u32) -> NttTables {
    let q = ntt_primes(bits, 1, n, &[]).unwrap()[0];
    NttTables::new(n, Modulus::new(q).unwrap()).unwrap()
}

fn random_vec(n: usize, q: u64, rng: &mut impl Rng) -> CoeffVector {
    let m = Modulus::new(q).unwrap();
    CoeffVector::new((0..n).map(|_| rng.gen_range(0..q)).collect(), &m, Domain::Coefficient).unwrap()
}

#[test]
fn forward_matches_naive_dft_on_hundred_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (n, bits) in [(8usize, 17u32), (16, 30), (1024, 60)] {
        let tab = tables(n, bits);
        let q = tab.modulus().value();
        let trials = if n == 1024 { 100 } else { 200 };
        for _ in 0..trials {
            let v = random_vec(n, q, &mut rng);
            let fast = ntt_forward(&v, &tab).unwrap();
            assert_eq!(fast.coeffs(), negacyclic_dft(v.coeffs(), tab.psi(), q).as_slice(), "n = {n}");
        }
    }
}

#[test]
fn q97_at_n8_matches_naive_dft() {
    let tab = NttTables::new(8, Modulus::new(97).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let v = random_vec(8, 97, &mut rng);
        let fast = ntt_forward(&v, &tab).unwrap();
        assert_eq!(fast.coeffs(), negacyclic_dft(v.coeffs(), tab.psi(), 97).as_slice());
    }
}

#[test]
fn round_trip_for_every_supported_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for log_n in 1..=16 {
        let n = 1usize << log_n;
        let tab = tables(n, 60);
        let v = random_vec(n, tab.modulus().value(), &mut rng);
        let back = ntt_inverse(&ntt_forward(&v, &tab).unwrap(), &tab).unwrap();
        assert_eq!(back, v, "n = {n}");
    }
}

#[test]
fn n4_q97_round_trip() {
    let m = Modulus::new(97).unwrap();
    let tab = NttTables::new(4, m).unwrap();
    let v = CoeffVector::new(vec![1, 2, 3, 4], &m, Domain::Coefficient).unwrap();
    assert_eq!(ntt_inverse(&ntt_forward(&v, &tab).unwrap(), &tab).unwrap(), v);
}

#[test]
fn mod_mul_matches_wide_oracle_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let q = rng.gen_range(2..(1u64 << 60)) | 1;
        let m = Modulus::new(q).unwrap();
        let (a, b) = (rng.gen_range(0..q), rng.gen_range(0..q));
        assert_eq!(mod_mul(a, b, &m), (a as u128 * b as u128 % q as u128) as u64);
    }
}

fn arb_pair(n: usize, q: u64) -> impl Strategy<Value = (Vec<u64>, Vec<u64>)> {
    (prop::collection::vec(0..q, n), prop::collection::vec(0..q, n))
}

const Q16: u64 = 1_073_741_441; // 30-bit, ≡ 1 mod 32

fn cv(v: Vec<u64>, m: &Modulus) -> CoeffVector {
    CoeffVector::new(v, m, Domain::Coefficient).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn barrett_reduces_any_u128(hi in any::<u64>(), lo in any::<u64>(), q in 2u64..(1 << 62)) {
        let m = Modulus::new(q).unwrap();
        let x = ((hi as u128) << 64) | lo as u128;
        prop_assert_eq!(m.reduce_u128(x), (x % q as u128) as u64);
    }

    #[test]
    fn round_trip_is_identity(v in prop::collection::vec(0..Q16, 16)) {
        let m = Modulus::new(Q16).unwrap();
        let tab = NttTables::new(16, m).unwrap();
        let x = cv(v, &m);
        prop_assert_eq!(ntt_inverse(&ntt_forward(&x, &tab).unwrap(), &tab).unwrap(), x);
    }

    #[test]
    fn forward_is_linear((a, b) in arb_pair(16, Q16)) {
        let m = Modulus::new(Q16).unwrap();
        let tab = NttTables::new(16, m).unwrap();
        let (a, b) = (cv(a, &m), cv(b, &m));
        let lhs = ntt_forward(&poly_add_mod(&a, &b, &m).unwrap(), &tab).unwrap();
        let rhs = poly_add_mod(&ntt_forward(&a, &tab).unwrap(), &ntt_forward(&b, &tab).unwrap(), &m).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_matches_schoolbook((a, b) in arb_pair(16, Q16)) {
        let m = Modulus::new(Q16).unwrap();
        let tab = NttTables::new(16, m).unwrap();
        let prod = negacyclic_mul(&cv(a.clone(), &m), &cv(b.clone(), &m), &tab).unwrap();
        prop_assert_eq!(prod.coeffs().to_vec(), schoolbook_negacyclic(&a, &b, Q16));
    }

    #[test]
    fn product_commutes_and_distributes(
        a in prop::collection::vec(0..Q16, 32),
        b in prop::collection::vec(0..Q16, 32),
        c in prop::collection::vec(0..Q16, 32),
    ) {
        let m = Modulus::new(Q16).unwrap();
        let tab = NttTables::new(32, m).unwrap();
        let (a, b, c) = (cv(a, &m), cv(b, &m), cv(c, &m));
        let ab = negacyclic_mul(&a, &b, &tab).unwrap();
        prop_assert_eq!(&ab, &negacyclic_mul(&b, &a, &tab).unwrap());
        let lhs = negacyclic_mul(&a, &poly_add_mod(&b, &c, &m).unwrap(), &tab).unwrap();
        let rhs = poly_add_mod(&ab, &negacyclic_mul(&a, &c, &tab).unwrap(), &m).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn addition_matches_scalar_loop((a, b) in arb_pair(32, Q16)) {
        let m = Modulus::new(Q16).unwrap();
        let sum = poly_add_mod(&cv(a.clone(), &m), &cv(b.clone(), &m), &m).unwrap();
        let expect: Vec<u64> = a.iter().zip(&b).map(|(x, y)| (x + y) % Q16).collect();
        prop_assert_eq!(sum.coeffs().to_vec(), expect);
    }
}

#[test]
fn schoolbook_agrees_for_all_small_degrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for log_n in 1..=5 {
        let n = 1usize << log_n;
        let tab = tables(n, 40);
        let q = tab.modulus().value();
        for _ in 0..50 {
            let a = random_vec(n, q, &mut rng);
            let b = random_vec(n, q, &mut rng);
            let prod = negacyclic_mul(&a, &b, &tab).unwrap();
            assert_eq!(prod.coeffs(), schoolbook_negacyclic(a.coeffs(), b.coeffs(), q).as_slice());
        }
    }
}
