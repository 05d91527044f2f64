use std::ops::Range;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::params::HeParams;
use crate::error::{Error, Result};
use crate::modring::{ntt_primes, Modulus, NttTables};

/// Fast (approximate) RNS base conversion from basis `A` to basis `B`.
///
/// For residues `x_i` of `x mod A`, computes `Σ [x_i·(A/a_i)^-1]_{a_i}·(A/a_i)`
/// modulo each `b_k`. The result equals `x + α·A` for a small `0 <= α < |A|`.
#[derive(Debug, Clone)]
pub(crate) struct BaseConverter {
    from: Vec<Modulus>,
    to: Vec<Modulus>,
    hat_inv: Vec<u64>,
    /// `hat_mod_to[k][i] = (A / a_i) mod b_k`
    hat_mod_to: Vec<Vec<u64>>,
}

impl BaseConverter {
    pub(crate) fn new(from: &[Modulus], to: &[Modulus]) -> Result<Self> {
        let mut hat_inv = Vec::with_capacity(from.len());
        for (i, a) in from.iter().enumerate() {
            let mut hat = 1u64;
            for (j, other) in from.iter().enumerate() {
                if i != j {
                    hat = a.mul(hat, a.reduce(other.value()));
                }
            }
            hat_inv.push(a.inv(hat).ok_or_else(|| {
                Error::Config(format!("RNS basis is not pairwise coprime at {}", a.value()))
            })?);
        }
        let hat_mod_to = to
            .iter()
            .map(|b| {
                (0..from.len())
                    .map(|i| {
                        from.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != i)
                            .fold(1u64, |acc, (_, other)| b.mul(acc, b.reduce(other.value())))
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            from: from.to_vec(),
            to: to.to_vec(),
            hat_inv,
            hat_mod_to,
        })
    }

    /// `inputs[i]` holds the coefficient-domain residues modulo `from[i]`;
    /// returns one coefficient vector per target modulus.
    pub(crate) fn convert(&self, inputs: &[&[u64]]) -> Vec<Vec<u64>> {
        debug_assert_eq!(inputs.len(), self.from.len());
        let n = inputs.first().map_or(0, |v| v.len());
        let scaled: Vec<Vec<u64>> = inputs
            .iter()
            .zip(self.from.iter().zip(&self.hat_inv))
            .map(|(x, (a, &h))| x.iter().map(|&c| a.mul(c, h)).collect())
            .collect();
        self.to
            .iter()
            .zip(&self.hat_mod_to)
            .map(|(b, hats)| {
                (0..n)
                    .map(|c| {
                        let mut acc = 0u128;
                        for (i, (y, &h)) in scaled.iter().zip(hats).enumerate() {
                            acc += y[c] as u128 * h as u128;
                            if i % 8 == 7 {
                                acc = b.reduce_u128(acc) as u128;
                            }
                        }
                        b.reduce_u128(acc)
                    })
                    .collect()
            })
            .collect()
    }
}

/// Precomputed tables for one parameter set: primes, NTT tables, scaling
/// constants, key-switching base converters and the slot layout.
#[derive(Debug)]
pub struct HeContext {
    params: HeParams,
    /// Q limbs followed by P limbs.
    pq_tables: Vec<NttTables>,
    t_tables: NttTables,
    q_big: BigUint,
    delta_mod_q: Vec<u64>,
    crt_factors: Vec<BigUint>,
    digits: Vec<Range<usize>>,
    /// Per digit: extension from the digit's limbs to every other PQ limb.
    digit_up: Vec<BaseConverter>,
    p_to_q: BaseConverter,
    p_mod_q: Vec<u64>,
    p_inv_mod_q: Vec<u64>,
    /// NTT-order index of each slot: `[0, u)` is row 0, `[u, n)` row 1.
    slot_index: Vec<usize>,
}

impl HeContext {
    pub fn new(params: HeParams) -> Result<Self> {
        params.validate()?;
        let n = params.n;
        let (q, p) = (&params.q_limbs, &params.p_limbs);
        let (q_primes, p_primes) = if p.bits == q.bits {
            // One descending sequence: Q takes the largest, P the next ones.
            let mut all = ntt_primes(q.bits, q.count + p.count, n, &[params.t])?;
            let p_primes = all.split_off(q.count);
            (all, p_primes)
        } else {
            let q_primes = ntt_primes(q.bits, q.count, n, &[params.t])?;
            let mut exclude = q_primes.clone();
            exclude.push(params.t);
            (q_primes, ntt_primes(p.bits, p.count, n, &exclude)?)
        };
        Self::with_primes(params, &q_primes, &p_primes)
    }

    /// Builds a context over explicitly chosen primes.
    pub fn with_primes(params: HeParams, q_primes: &[u64], p_primes: &[u64]) -> Result<Self> {
        params.validate()?;
        let n = params.n;
        if q_primes.len() != params.q_limbs.count || p_primes.len() != params.p_limbs.count {
            return Err(Error::Config("prime list lengths do not match the limb counts".into()));
        }
        let mut seen = q_primes.to_vec();
        seen.extend_from_slice(p_primes);
        seen.push(params.t);
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("RNS primes and t must be distinct".into()));
        }

        let pq_tables = q_primes
            .iter()
            .chain(p_primes)
            .map(|&p| NttTables::new(n, Modulus::new(p)?))
            .collect::<Result<Vec<_>>>()?;
        let t_tables = NttTables::new(n, Modulus::new(params.t)?)?;

        let q_mods: Vec<Modulus> = pq_tables[..q_primes.len()].iter().map(|t| *t.modulus()).collect();
        let p_mods: Vec<Modulus> = pq_tables[q_primes.len()..].iter().map(|t| *t.modulus()).collect();

        let q_big = q_primes.iter().fold(BigUint::one(), |acc, &q| acc * q);
        let delta = &q_big / params.t;
        let delta_mod_q = q_primes
            .iter()
            .map(|&q| (&delta % q).to_u64().expect("residue fits"))
            .collect();
        let crt_factors = q_mods
            .iter()
            .map(|qi| {
                let hat = &q_big / qi.value();
                let hat_mod = (&hat % qi.value()).to_u64().expect("residue fits");
                let inv = qi.inv(hat_mod).expect("pairwise coprime primes");
                hat * inv
            })
            .collect();

        let digits = params.digit_ranges();
        let digit_up = digits
            .iter()
            .map(|range| {
                let from = &q_mods[range.clone()];
                let to: Vec<Modulus> = q_mods
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !range.contains(i))
                    .map(|(_, m)| *m)
                    .chain(p_mods.iter().copied())
                    .collect();
                BaseConverter::new(from, &to)
            })
            .collect::<Result<Vec<_>>>()?;
        let p_to_q = BaseConverter::new(&p_mods, &q_mods)?;
        let p_mod_q: Vec<u64> = q_mods
            .iter()
            .map(|qi| p_mods.iter().fold(1u64, |acc, p| qi.mul(acc, qi.reduce(p.value()))))
            .collect();
        let p_inv_mod_q = q_mods
            .iter()
            .zip(&p_mod_q)
            .map(|(qi, &pm)| qi.inv(pm).expect("P coprime to Q"))
            .collect();

        let slot_index = slot_layout(n);

        Ok(Self {
            params,
            pq_tables,
            t_tables,
            q_big,
            delta_mod_q,
            crt_factors,
            digits,
            digit_up,
            p_to_q,
            p_mod_q,
            p_inv_mod_q,
            slot_index,
        })
    }

    pub fn params(&self) -> &HeParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn slot_count(&self) -> usize {
        self.params.n / 2
    }

    pub fn t(&self) -> &Modulus {
        self.t_tables.modulus()
    }

    pub fn q_count(&self) -> usize {
        self.params.q_limbs.count
    }

    pub fn p_count(&self) -> usize {
        self.params.p_limbs.count
    }

    pub fn q_tables(&self) -> &[NttTables] {
        &self.pq_tables[..self.q_count()]
    }

    pub fn pq_tables(&self) -> &[NttTables] {
        &self.pq_tables
    }

    pub fn t_tables(&self) -> &NttTables {
        &self.t_tables
    }

    pub fn q_primes(&self) -> Vec<u64> {
        self.q_tables().iter().map(|t| t.modulus().value()).collect()
    }

    pub fn p_primes(&self) -> Vec<u64> {
        self.pq_tables[self.q_count()..]
            .iter()
            .map(|t| t.modulus().value())
            .collect()
    }

    pub fn q_big(&self) -> &BigUint {
        &self.q_big
    }

    pub(crate) fn delta_mod_q(&self) -> &[u64] {
        &self.delta_mod_q
    }

    pub(crate) fn crt_factors(&self) -> &[BigUint] {
        &self.crt_factors
    }

    pub fn digits(&self) -> &[Range<usize>] {
        &self.digits
    }

    pub(crate) fn digit_up(&self, j: usize) -> &BaseConverter {
        &self.digit_up[j]
    }

    pub(crate) fn p_to_q(&self) -> &BaseConverter {
        &self.p_to_q
    }

    pub(crate) fn p_mod_q(&self) -> &[u64] {
        &self.p_mod_q
    }

    pub(crate) fn p_inv_mod_q(&self) -> &[u64] {
        &self.p_inv_mod_q
    }

    pub(crate) fn slot_index(&self) -> &[usize] {
        &self.slot_index
    }

    /// Galois element `3^shift mod 2n` realizing a left rotation of both slot
    /// rows by `shift`.
    pub fn galois_element(&self, shift: usize) -> usize {
        let two_n = 2 * self.n();
        let shift = shift % self.slot_count();
        let mut g = 1usize;
        for _ in 0..shift {
            g = g * 3 % two_n;
        }
        g
    }

    /// Inverse of [`HeContext::galois_element`]; `None` if `g` is not a power of 3.
    pub fn shift_of_galois_element(&self, g: usize) -> Option<usize> {
        let two_n = 2 * self.n();
        let mut cur = 1usize;
        for shift in 0..self.slot_count() {
            if cur == g % two_n {
                return Some(shift);
            }
            cur = cur * 3 % two_n;
        }
        None
    }

    /// Bytes of one limb in memory (64-bit words).
    pub fn limb_bytes(&self) -> usize {
        self.n() * 8
    }

    /// log2(Q) as a float.
    pub fn log2_q(&self) -> f64 {
        log2_big(&self.q_big)
    }
}

pub(crate) fn log2_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap() as f64;
    top.log2() + shift as f64
}

/// Row 0 slot `i` sits at `ζ^(3^i)`, row 1 at `ζ^(-3^i)`; evaluation at
/// `ζ^(2j+1)` is NTT output index `j`.
fn slot_layout(n: usize) -> Vec<usize> {
    let two_n = 2 * n;
    let u = n / 2;
    let mut index = vec![0; n];
    let mut e = 1usize;
    for i in 0..u {
        index[i] = (e - 1) / 2;
        index[u + i] = (two_n - e - 1) / 2;
        e = e * 3 % two_n;
    }
    index
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_params() -> HeParams {
        HeParams {
            n: 16,
            t: 97,
            dnum: 2,
            seed: 0,
            q_limbs: crate::bfv::LimbSpec { bits: 30, count: 3 },
            p_limbs: crate::bfv::LimbSpec { bits: 30, count: 2 },
            matmul: None,
        }
    }

    #[test]
    fn slot_layout_is_a_permutation() {
        let idx = slot_layout(64);
        let mut sorted = idx.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..64).collect::<Vec<_>>());
    }

    #[test]
    fn base_conversion_is_exact_up_to_multiple() {
        let ctx = HeContext::new(small_params()).unwrap();
        let q = ctx.q_primes();
        let p = ctx.p_primes();
        let from: Vec<Modulus> = p.iter().map(|&v| Modulus::new(v).unwrap()).collect();
        let to: Vec<Modulus> = q.iter().map(|&v| Modulus::new(v).unwrap()).collect();
        let conv = BaseConverter::new(&from, &to).unwrap();
        let big_p: u128 = p.iter().map(|&v| v as u128).product();
        for x in [0u128, 1, 12345, big_p - 1, big_p / 3] {
            let inputs: Vec<Vec<u64>> = p.iter().map(|&m| vec![(x % m as u128) as u64]).collect();
            let refs: Vec<&[u64]> = inputs.iter().map(|v| v.as_slice()).collect();
            let out = conv.convert(&refs);
            // out ≡ x + α·P for some α in [0, |P|)
            let ok = (0..p.len() as u128).any(|alpha| {
                q.iter()
                    .zip(&out)
                    .all(|(&m, o)| ((x + alpha * big_p) % m as u128) as u64 == o[0])
            });
            assert!(ok, "x = {x}");
        }
    }

    #[test]
    fn galois_elements_round_trip() {
        let ctx = HeContext::new(small_params()).unwrap();
        assert_eq!(ctx.galois_element(0), 1);
        assert_eq!(ctx.galois_element(1), 3);
        for s in 0..ctx.slot_count() {
            assert_eq!(ctx.shift_of_galois_element(ctx.galois_element(s)), Some(s));
        }
        assert_eq!(ctx.shift_of_galois_element(2 * ctx.n() - 1), None);
    }

    #[test]
    fn constants_are_consistent() {
        let ctx = HeContext::new(small_params()).unwrap();
        for (qi, (&pm, &pinv)) in ctx.q_tables().iter().zip(ctx.p_mod_q().iter().zip(ctx.p_inv_mod_q())) {
            assert_eq!(qi.modulus().mul(pm, pinv), 1);
        }
        let delta = ctx.q_big() / ctx.params().t;
        for (qi, &d) in ctx.q_primes().iter().zip(ctx.delta_mod_q()) {
            assert_eq!((&delta % *qi).to_u64().unwrap(), d);
        }
    }
}
