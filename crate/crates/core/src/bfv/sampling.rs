use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::rns::RnsPoly;
use crate::modring::{CoeffVector, Domain, NttTables};

/// Number of coin pairs in the centered binomial error distribution
/// (variance η/2 = 10.5, standard deviation ≈ 3.24).
pub const CBD_ETA: u32 = 21;

pub(crate) fn rng_from_seed(seed: u64, domain_tag: u64) -> ChaCha20Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&domain_tag.to_le_bytes());
    ChaCha20Rng::from_seed(key)
}

pub(crate) fn ternary(n: usize, rng: &mut impl Rng) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-1i64..=1)).collect()
}

pub(crate) fn centered_binomial(n: usize, rng: &mut impl RngCore) -> Vec<i64> {
    let mask = (1u64 << CBD_ETA) - 1;
    (0..n)
        .map(|_| {
            let bits = rng.next_u64();
            (bits & mask).count_ones() as i64 - ((bits >> 32) & mask).count_ones() as i64
        })
        .collect()
}

/// Uniform element of the basis, sampled directly in the NTT domain.
pub(crate) fn uniform_ntt(basis: &[NttTables], rng: &mut impl Rng) -> RnsPoly {
    let limbs = basis
        .iter()
        .map(|t| {
            let q = t.modulus().value();
            CoeffVector::new((0..t.n()).map(|_| rng.gen_range(0..q)).collect(), t.modulus(), Domain::Ntt)
                .expect("sampled below modulus")
        })
        .collect();
    RnsPoly::new(limbs).expect("uniform limbs share a shape")
}
