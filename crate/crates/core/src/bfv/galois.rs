//! The automorphisms `X → X^g` of `Z_q[X]/(X^n + 1)` for odd `g`.

use crate::modring::{CoeffVector, Domain, Modulus};

/// Coefficient domain: `X^i → ±X^(i·g mod n)`, negated when `i·g mod 2n >= n`.
pub(crate) fn permute_coefficients(a: &[u64], g: usize, q: &Modulus) -> Vec<u64> {
    let n = a.len();
    let two_n = 2 * n;
    let mut out = vec![0u64; n];
    let mut e = 0usize;
    for &c in a {
        if e < n {
            out[e] = c;
        } else {
            out[e - n] = q.neg(c);
        }
        e = (e + g) % two_n;
    }
    out
}

pub(crate) fn permute_signed(a: &[i64], g: usize) -> Vec<i64> {
    let n = a.len();
    let two_n = 2 * n;
    let mut out = vec![0i64; n];
    let mut e = 0usize;
    for &c in a {
        if e < n {
            out[e] = c;
        } else {
            out[e - n] = -c;
        }
        e = (e + g) % two_n;
    }
    out
}

/// NTT domain (natural order, index `j` ↔ `ψ^(2j+1)`): `σ_g(p)(ψ^e) = p(ψ^(g·e))`,
/// so output `j` reads input `j'` with `2j'+1 = g·(2j+1) mod 2n`.
pub(crate) fn permute_evaluations(a: &[u64], g: usize) -> Vec<u64> {
    let n = a.len();
    let two_n = 2 * n;
    (0..n)
        .map(|j| {
            let e = (g * (2 * j + 1)) % two_n;
            a[(e - 1) / 2]
        })
        .collect()
}

pub(crate) fn apply_to_limb(limb: &CoeffVector, g: usize, q: &Modulus) -> CoeffVector {
    let coeffs = match limb.domain() {
        Domain::Coefficient => permute_coefficients(limb.coeffs(), g, q),
        Domain::Ntt => permute_evaluations(limb.coeffs(), g),
    };
    CoeffVector::from_reduced(coeffs, limb.modulus(), limb.domain())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modring::NttTables;

    #[test]
    fn hand_evaluated_exponent_map() {
        // n = 4, g = 3: X → X^3, X^2 → X^6 = -X^2, X^3 → X^9 = X
        let q = Modulus::new(97).unwrap();
        assert_eq!(permute_coefficients(&[0, 1, 0, 0], 3, &q), vec![0, 0, 0, 1]);
        assert_eq!(permute_coefficients(&[0, 0, 1, 0], 3, &q), vec![0, 0, 96, 0]);
        assert_eq!(permute_coefficients(&[0, 0, 0, 1], 3, &q), vec![0, 1, 0, 0]);
        assert_eq!(permute_coefficients(&[5, 6, 7, 8], 1, &q), vec![5, 6, 7, 8]);
    }

    #[test]
    fn ntt_and_coefficient_forms_agree() {
        let q = Modulus::new(97).unwrap();
        let tables = NttTables::new(16, q).unwrap();
        let a: Vec<u64> = (0..16).map(|i| (i * 7 + 3) % 97).collect();
        for g in [1usize, 3, 5, 9, 31] {
            let mut via_coeff = permute_coefficients(&a, g, &q);
            tables.forward(&mut via_coeff);
            let mut ev = a.clone();
            tables.forward(&mut ev);
            assert_eq!(permute_evaluations(&ev, g), via_coeff, "g = {g}");
        }
    }

    #[test]
    fn signed_matches_modular() {
        let q = Modulus::new(97).unwrap();
        let s = vec![1i64, -1, 0, 1, 1, 0, -1, -1];
        let g = 5;
        let signed: Vec<u64> = permute_signed(&s, g).iter().map(|&c| q.reduce_i64(c)).collect();
        let reduced: Vec<u64> = s.iter().map(|&c| q.reduce_i64(c)).collect();
        assert_eq!(permute_coefficients(&reduced, g, &q), signed);
    }
}
