//! Negacyclic number-theoretic transform over `Z_q[X]/(X^n + 1)`.
//!
//! Forward: iterative Cooley–Tukey with the `ψ` twist merged into the
//! twiddles. Inverse: Gentleman–Sande with the `ψ^-1` untwist and `n^-1`
//! scaling. Both butterflies run on bit-reversed order internally; callers see
//! natural order, where output index `j` holds the evaluation at `ψ^(2j+1)`.

use super::modulus::Modulus;
use super::prime::minimal_primitive_root;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct NttTables {
    n: usize,
    log_n: u32,
    modulus: Modulus,
    psi: u64,
    /// `ψ^bitrev(i)` for i in 0..n.
    psi_rev: Vec<u64>,
    /// `ψ^-bitrev(i)` for i in 0..n.
    psi_inv_rev: Vec<u64>,
    n_inv: u64,
}

#[inline]
fn bit_reverse(x: usize, bits: u32) -> usize {
    if bits == 0 {
        0
    } else {
        x.reverse_bits() >> (usize::BITS - bits)
    }
}

pub(crate) fn bit_reverse_permute(values: &mut [u64]) {
    let bits = values.len().trailing_zeros();
    for i in 0..values.len() {
        let j = bit_reverse(i, bits);
        if i < j {
            values.swap(i, j);
        }
    }
}

impl NttTables {
    pub fn new(n: usize, modulus: Modulus) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::Config(format!(
                "ring degree {n} is not a power of two >= 2"
            )));
        }
        let psi = minimal_primitive_root(n, &modulus)?;
        let psi_inv = modulus
            .inv(psi)
            .ok_or_else(|| Error::Config("root of unity is not invertible".into()))?;
        let log_n = n.trailing_zeros();

        let mut psi_pows = Vec::with_capacity(n);
        let mut psi_inv_pows = Vec::with_capacity(n);
        let (mut a, mut b) = (1u64, 1u64);
        for _ in 0..n {
            psi_pows.push(a);
            psi_inv_pows.push(b);
            a = modulus.mul(a, psi);
            b = modulus.mul(b, psi_inv);
        }
        let psi_rev = (0..n).map(|i| psi_pows[bit_reverse(i, log_n)]).collect();
        let psi_inv_rev = (0..n).map(|i| psi_inv_pows[bit_reverse(i, log_n)]).collect();
        let n_inv = modulus
            .inv(n as u64 % modulus.value())
            .ok_or_else(|| Error::Config(format!("{n} is not invertible modulo {}", modulus.value())))?;

        Ok(Self {
            n,
            log_n,
            modulus,
            psi,
            psi_rev,
            psi_inv_rev,
            n_inv,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    /// The primitive `2n`-th root of unity used for the twist.
    pub fn psi(&self) -> u64 {
        self.psi
    }

    /// In-place forward transform, natural order in and out.
    pub fn forward(&self, a: &mut [u64]) {
        assert_eq!(a.len(), self.n, "transform length mismatch");
        let q = &self.modulus;
        let mut t = self.n;
        let mut m = 1;
        while m < self.n {
            t >>= 1;
            for i in 0..m {
                let w = self.psi_rev[m + i];
                let start = 2 * i * t;
                let (lo, hi) = a[start..start + 2 * t].split_at_mut(t);
                for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                    let u = *x;
                    let v = q.mul(*y, w);
                    *x = q.add(u, v);
                    *y = q.sub(u, v);
                }
            }
            m <<= 1;
        }
        bit_reverse_permute(a);
    }

    /// In-place inverse transform, natural order in and out.
    pub fn inverse(&self, a: &mut [u64]) {
        assert_eq!(a.len(), self.n, "transform length mismatch");
        let q = &self.modulus;
        bit_reverse_permute(a);
        let mut t = 1;
        let mut m = self.n;
        while m > 1 {
            let h = m >> 1;
            for i in 0..h {
                let w = self.psi_inv_rev[h + i];
                let start = 2 * i * t;
                let (lo, hi) = a[start..start + 2 * t].split_at_mut(t);
                for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                    let u = *x;
                    let v = *y;
                    *x = q.add(u, v);
                    *y = q.mul(q.sub(u, v), w);
                }
            }
            t <<= 1;
            m = h;
        }
        for x in a.iter_mut() {
            *x = q.mul(*x, self.n_inv);
        }
    }

    pub fn log_n(&self) -> u32 {
        self.log_n
    }
}
