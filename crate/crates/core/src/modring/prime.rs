//! Primality testing and NTT-friendly prime / root-of-unity search.

use super::modulus::{Modulus, MAX_MODULUS_BITS};
use crate::error::{Error, Result};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The `count` largest primes of exactly `bits` bits with `p ≡ 1 (mod 2n)`,
/// skipping anything listed in `exclude`. Output is in descending order.
pub fn ntt_primes(bits: u32, count: usize, n: usize, exclude: &[u64]) -> Result<Vec<u64>> {
    if !(2..=MAX_MODULUS_BITS).contains(&bits) {
        return Err(Error::Config(format!(
            "prime width {bits} outside [2, {MAX_MODULUS_BITS}]"
        )));
    }
    if !n.is_power_of_two() {
        return Err(Error::Config(format!("ring degree {n} is not a power of two")));
    }
    let step = 2 * n as u64;
    let upper = 1u64 << bits;
    let lower = 1u64 << (bits - 1);
    if step >= upper {
        return Err(Error::Config(format!(
            "no {bits}-bit prime can be 1 mod {step}"
        )));
    }
    // Largest candidate below 2^bits that is 1 mod 2n.
    let mut candidate = (upper - 1) / step * step + 1;
    if candidate >= upper {
        candidate -= step;
    }
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        if candidate < lower {
            return Err(Error::Config(format!(
                "only {} primes of {bits} bits are 1 mod {step}; {count} requested",
                out.len()
            )));
        }
        if is_prime(candidate) && !exclude.contains(&candidate) {
            out.push(candidate);
        }
        candidate -= step;
    }
    Ok(out)
}

/// Smallest primitive `2n`-th root of unity modulo a prime `q`.
///
/// A candidate `ψ = x^((q-1)/2n)` has order exactly `2n` iff `ψ^n = -1`,
/// since `2n` is a power of two. The primitive roots are the odd powers of
/// any one of them; the smallest is returned so transforms are reproducible.
pub fn minimal_primitive_root(n: usize, q: &Modulus) -> Result<u64> {
    let two_n = 2 * n as u64;
    let qv = q.value();
    if !n.is_power_of_two() || (qv - 1) % two_n != 0 {
        return Err(Error::Config(format!(
            "modulus {qv} has no primitive {two_n}-th root of unity"
        )));
    }
    let cofactor = (qv - 1) / two_n;
    let mut root = None;
    for x in 2..qv {
        let psi = q.pow(x, cofactor);
        if q.pow(psi, n as u64) == qv - 1 {
            root = Some(psi);
            break;
        }
        if x > 10_000 {
            break;
        }
    }
    let psi = root.ok_or_else(|| {
        Error::Config(format!("no primitive {two_n}-th root found modulo {qv}"))
    })?;

    let psi_sq = q.mul(psi, psi);
    let mut current = psi;
    let mut best = psi;
    for _ in 0..n {
        best = best.min(current);
        current = q.mul(current, psi_sq);
    }
    Ok(best)
}
