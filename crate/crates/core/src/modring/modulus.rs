use crate::error::{Error, Result};

/// Largest supported modulus width. Residues stay below 2^62 so that a sum of
/// two residues never overflows a word and products fit in 124 bits.
pub const MAX_MODULUS_BITS: u32 = 62;

/// A word-sized modulus with a precomputed Barrett constant.
///
/// `barrett_ratio` is `floor(2^128 / q)`; reduction of a 128-bit product
/// estimates the quotient from the high half of `x * ratio`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Modulus {
    value: u64,
    barrett_ratio: u128,
}

impl Modulus {
    pub fn new(value: u64) -> Result<Self> {
        if !(2..1 << MAX_MODULUS_BITS).contains(&value) {
            return Err(Error::Config(format!(
                "modulus {value} outside [2, 2^{MAX_MODULUS_BITS})"
            )));
        }
        // floor(2^128 / q) == floor((2^128 - 1) / q) unless q is a power of two.
        let mut ratio = u128::MAX / value as u128;
        if value.is_power_of_two() {
            ratio += 1;
        }
        Ok(Self {
            value,
            barrett_ratio: ratio,
        })
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn bits(&self) -> u32 {
        64 - self.value.leading_zeros()
    }

    pub fn barrett_ratio(&self) -> u128 {
        self.barrett_ratio
    }

    /// Barrett reduction of any 128-bit value. The quotient estimate is at
    /// most a few units low, so the correction loop runs a bounded number of
    /// times.
    #[inline]
    pub fn reduce_u128(&self, x: u128) -> u64 {
        const MASK: u128 = u64::MAX as u128;
        let (x0, x1) = (x & MASK, x >> 64);
        let (r0, r1) = (self.barrett_ratio & MASK, self.barrett_ratio >> 64);

        let low = (x0 * r0) >> 64;
        let cross_a = x1 * r0;
        let cross_b = x0 * r1;
        let mid = low + (cross_a & MASK) + (cross_b & MASK);
        let quotient = x1 * r1 + (cross_a >> 64) + (cross_b >> 64) + (mid >> 64);

        let mut r = x - quotient * self.value as u128;
        let q = self.value as u128;
        while r >= q {
            r -= q;
        }
        r as u64
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        if x < self.value {
            x
        } else {
            x % self.value
        }
    }

    /// Reduces a signed integer into `[0, q)`.
    #[inline]
    pub fn reduce_i64(&self, x: i64) -> u64 {
        let r = x.rem_euclid(self.value as i64);
        r as u64
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.value && b < self.value);
        self.reduce_u128(a as u128 * b as u128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.value && b < self.value);
        let s = a + b;
        if s >= self.value {
            s - self.value
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.value && b < self.value);
        if a >= b {
            a - b
        } else {
            a + self.value - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        debug_assert!(a < self.value);
        if a == 0 {
            0
        } else {
            self.value - a
        }
    }

    pub fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let mut base = self.reduce(base);
        let mut acc = 1 % self.value;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` when `a` shares a factor with `q`.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let (mut r0, mut r1) = (self.value as i128, self.reduce(a) as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let quot = r0 / r1;
            (r0, r1) = (r1, r0 - quot * r1);
            (t0, t1) = (t1, t0 - quot * t1);
        }
        if r0 != 1 {
            return None;
        }
        Some(t0.rem_euclid(self.value as i128) as u64)
    }

    /// Centered representative of `a` in `(-q/2, q/2]`.
    #[inline]
    pub fn center(&self, a: u64) -> i64 {
        if a > self.value / 2 {
            a as i64 - self.value as i64
        } else {
            a as i64
        }
    }
}

/// Free-function form of [`Modulus::mul`].
#[inline]
pub fn mod_mul(a: u64, b: u64, m: &Modulus) -> u64 {
    m.mul(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_and_identity() {
        let m = Modulus::new((1 << 60) - 93).unwrap();
        let x = 123_456_789_012_345;
        assert_eq!(mod_mul(0, x, &m), 0);
        assert_eq!(mod_mul(1, x, &m), x);
    }

    #[test]
    fn barrett_matches_wide_multiply() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let bits = rng.gen_range(2..=MAX_MODULUS_BITS);
            let q = rng.gen_range(2..(1u64 << bits));
            let m = Modulus::new(q).unwrap();
            let a = rng.gen_range(0..q);
            let b = rng.gen_range(0..q);
            let expected = (a as u128 * b as u128 % q as u128) as u64;
            assert_eq!(mod_mul(a, b, &m), expected, "q={q} a={a} b={b}");
        }
    }

    #[test]
    fn extreme_residues() {
        for q in [2u64, 3, 97, (1 << 61) - 1, (1 << 62) - 57] {
            let m = Modulus::new(q).unwrap();
            let a = q - 1;
            assert_eq!(m.mul(a, a), ((a as u128 * a as u128) % q as u128) as u64);
        }
    }

    #[test]
    fn rejects_out_of_range_modulus() {
        assert!(Modulus::new(1).is_err());
        assert!(Modulus::new(1 << 62).is_err());
    }

    #[test]
    fn inverse_and_pow() {
        let m = Modulus::new(97).unwrap();
        for a in 1..97 {
            let inv = m.inv(a).unwrap();
            assert_eq!(m.mul(a, inv), 1);
            assert_eq!(m.pow(a, 96), 1);
        }
        assert_eq!(Modulus::new(10).unwrap().inv(4), None);
    }

    #[test]
    fn signed_reduction_and_center() {
        let m = Modulus::new(97).unwrap();
        assert_eq!(m.reduce_i64(-1), 96);
        assert_eq!(m.center(96), -1);
        assert_eq!(m.center(48), 48);
        assert_eq!(m.center(49), -48);
    }
}
