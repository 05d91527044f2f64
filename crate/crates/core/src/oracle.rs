//! Slow reference evaluators.
//!
//! Each routine here is written directly from the defining formula, sharing no
//! code path with the fast implementations it is used to check. They back the
//! unit tests, the acceptance suite and the `verify` command.

use crate::modring::Modulus;

fn mul(a: u64, b: u64, q: u64) -> u64 {
    (a as u128 * b as u128 % q as u128) as u64
}

fn pow(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base, q);
        }
        base = mul(base, base, q);
        exp >>= 1;
    }
    acc
}

/// `out[j] = v(ψ^(2j+1))`, evaluated term by term in `O(n²)`.
pub fn negacyclic_dft(v: &[u64], psi: u64, q: u64) -> Vec<u64> {
    let n = v.len() as u64;
    (0..n)
        .map(|j| {
            let point = pow(psi, 2 * j + 1, q);
            let mut acc = 0u128;
            let mut x = 1u64;
            for &c in v {
                acc = (acc + mul(c, x, q) as u128) % q as u128;
                x = mul(x, point, q);
            }
            acc as u64
        })
        .collect()
}

/// Schoolbook product in `Z_q[X]/(X^n + 1)`.
#[allow(clippy::needless_range_loop)]
pub fn schoolbook_negacyclic(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let n = a.len();
    assert_eq!(n, b.len());
    let mut acc = vec![0i128; n];
    for i in 0..n {
        for j in 0..n {
            let prod = mul(a[i], b[j], q) as i128;
            let k = i + j;
            if k < n {
                acc[k] += prod;
            } else {
                acc[k - n] -= prod;
            }
        }
    }
    acc.into_iter()
        .map(|c| c.rem_euclid(q as i128) as u64)
        .collect()
}

/// Plaintext `M·v mod t` for a row-major `rows × cols` matrix.
pub fn matvec_mod(matrix: &[u64], rows: usize, cols: usize, v: &[u64], t: u64) -> Vec<u64> {
    assert_eq!(matrix.len(), rows * cols);
    assert_eq!(v.len(), cols);
    (0..rows)
        .map(|r| {
            let mut acc = 0u128;
            for c in 0..cols {
                acc += matrix[r * cols + c] as u128 * v[c] as u128;
            }
            (acc % t as u128) as u64
        })
        .collect()
}

/// `out[i] = v[(i + shift) mod len]`.
pub fn rotate_left(v: &[u64], shift: usize) -> Vec<u64> {
    let len = v.len();
    (0..len).map(|i| v[(i + shift) % len]).collect()
}

/// Image of `Σ a_i X^i` under `X → X^g` in `Z_q[X]/(X^n+1)`, by exponent
/// bookkeeping.
pub fn galois_coefficients(a: &[u64], g: usize, q: &Modulus) -> Vec<u64> {
    let n = a.len();
    let mut out = vec![0u64; n];
    for (i, &c) in a.iter().enumerate() {
        let e = (i * g) % (2 * n);
        let (idx, neg) = if e >= n { (e - n, true) } else { (e, false) };
        out[idx] = if neg { q.neg(c) } else { c };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schoolbook_wraps() {
        // X^3 * X = X^4 = -1 mod X^4 + 1
        assert_eq!(
            schoolbook_negacyclic(&[0, 0, 0, 1], &[0, 1, 0, 0], 97),
            vec![96, 0, 0, 0]
        );
    }

    #[test]
    fn matvec_worked_example() {
        let m = [1, 2, 3, 4, 5, 6, 7, 8];
        assert_eq!(matvec_mod(&m, 4, 2, &[9, 10], 65537), vec![29, 67, 105, 143]);
    }
}
