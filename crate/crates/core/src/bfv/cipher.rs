use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::context::{log2_big, HeContext};
use super::encoding::{Encoding, Plaintext};
use super::keys::SecretKey;
use super::rns::RnsPoly;
use super::sampling::{centered_binomial, rng_from_seed, uniform_ntt};
use crate::error::{Error, Result};
use crate::modring::{CoeffVector, Domain};

const TAG_ENCRYPT: u64 = 0x454e_4352;

/// A centered residue is always below `Q/2`, so noise that has wrapped
/// around `Q` looks like a budget just above zero. Decryption therefore
/// insists on one bit of headroom (`max|r| < Q/4`); uniformly random residues
/// clear that bar with probability `2^-n`.
pub const MIN_BUDGET_BITS: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Provenance {
    Fresh,
    Derived,
}

/// `(c0, c1)` over the Q limbs, decrypting as `c0 + c1·s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    c0: RnsPoly,
    c1: RnsPoly,
    encoding: Encoding,
    provenance: Provenance,
}

impl Ciphertext {
    pub fn new(c0: RnsPoly, c1: RnsPoly, encoding: Encoding, provenance: Provenance) -> Result<Self> {
        if c0.moduli() != c1.moduli() || c0.n() != c1.n() || c0.domain() != c1.domain() {
            return Err(Error::Usage(
                "ciphertext components differ in limbs or domain".into(),
            ));
        }
        Ok(Self {
            c0,
            c1,
            encoding,
            provenance,
        })
    }

    pub(crate) fn derived(c0: RnsPoly, c1: RnsPoly, encoding: Encoding) -> Self {
        debug_assert_eq!(c0.domain(), c1.domain());
        Self {
            c0,
            c1,
            encoding,
            provenance: Provenance::Derived,
        }
    }

    pub fn c0(&self) -> &RnsPoly {
        &self.c0
    }

    pub fn c1(&self) -> &RnsPoly {
        &self.c1
    }

    pub fn domain(&self) -> Domain {
        self.c0.domain()
    }

    pub fn encoding(&self) -> Encoding {
        self.encoding
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn moduli(&self) -> Vec<u64> {
        self.c0.moduli()
    }

    /// Same ciphertext with both components in `domain`.
    pub fn in_domain(&self, domain: Domain, ctx: &HeContext) -> Self {
        let mut out = self.clone();
        out.c0.to_domain(domain, ctx.q_tables());
        out.c1.to_domain(domain, ctx.q_tables());
        out
    }

    pub(crate) fn into_parts(self) -> (RnsPoly, RnsPoly) {
        (self.c0, self.c1)
    }
}

/// Secret-key encryption: `c1 = a`, `c0 = -a·s + e + Δ·m` with `Δ = ⌊Q/t⌋`.
/// The result is in the coefficient domain.
pub fn encrypt(pt: &Plaintext, sk: &SecretKey, ctx: &HeContext, seed: u64) -> Result<Ciphertext> {
    if pt.poly().n() != ctx.n() || pt.poly().modulus() != ctx.t().value() {
        return Err(Error::Usage("plaintext does not match the parameter set".into()));
    }
    let basis = ctx.q_tables();
    let mut rng = rng_from_seed(seed, TAG_ENCRYPT);
    let a = uniform_ntt(basis, &mut rng);
    let e = centered_binomial(ctx.n(), &mut rng);

    let m = pt.poly().coeffs();
    let limbs: Vec<CoeffVector> = basis
        .par_iter()
        .zip(ctx.delta_mod_q())
        .map(|(tab, &delta)| {
            let q = tab.modulus();
            let coeffs = m
                .iter()
                .zip(&e)
                .map(|(&mi, &ei)| q.add(q.mul(delta, q.reduce(mi)), q.reduce_i64(ei)))
                .collect();
            let mut limb = CoeffVector::from_reduced(coeffs, q.value(), Domain::Coefficient);
            limb.switch_to_ntt(tab);
            limb
        })
        .collect();
    let scaled = RnsPoly::new(limbs)?;

    let a_s = a.mul_ntt(&sk.ntt_q(ctx), basis)?;
    let mut c0 = scaled.sub(&a_s, basis)?;
    let mut c1 = a;
    c0.to_coeff(basis);
    c1.to_coeff(basis);
    Ciphertext::new(c0, c1, pt.encoding(), Provenance::Fresh)
}

/// Result of a successful decryption.
#[derive(Debug, Clone)]
pub struct Decrypted {
    pub plaintext: Plaintext,
    /// `log2(Q / (2·max|r|))` where `r = t·(c0 + c1·s) mod Q`, centered.
    /// Decryption is correct while this is positive; [`decrypt`] reports a
    /// failure below [`MIN_BUDGET_BITS`].
    pub noise_budget_bits: f64,
}

/// Recovers the plaintext and measures the remaining noise budget.
pub fn decrypt(ct: &Ciphertext, sk: &SecretKey, ctx: &HeContext) -> Result<Decrypted> {
    if ct.moduli() != ctx.q_primes() {
        return Err(Error::Usage("ciphertext limbs do not match the parameter set".into()));
    }
    let basis = ctx.q_tables();
    let ntt_ct = ct.in_domain(Domain::Ntt, ctx);
    let mut x = ntt_ct
        .c1
        .mul_ntt(&sk.ntt_q(ctx), basis)?
        .add(&ntt_ct.c0, basis)?;
    x.to_coeff(basis);

    let q_big = ctx.q_big();
    let t = ctx.t().value();
    let crt = ctx.crt_factors();
    let limbs = x.limbs();

    let per_coeff: Vec<(u64, BigUint)> = (0..ctx.n())
        .into_par_iter()
        .map(|c| {
            let mut acc = BigUint::zero();
            for (limb, factor) in limbs.iter().zip(crt) {
                acc += factor * limb.coeffs()[c];
            }
            let value = acc % q_big;
            let scaled = value * t;
            let quotient = &scaled / q_big;
            let rem = scaled - &quotient * q_big;
            let twice = &rem << 1;
            let (rounded, noise) = if &twice >= q_big {
                (quotient + 1u32, q_big - rem)
            } else {
                (quotient, rem)
            };
            let m = (rounded % t).to_u64().expect("reduced below t");
            (m, noise)
        })
        .collect();

    let max_noise = per_coeff
        .iter()
        .map(|(_, r)| r)
        .max()
        .cloned()
        .unwrap_or_default();
    let noise_bits = log2_big(&max_noise);
    let budget = if max_noise.is_zero() {
        ctx.log2_q() - 1.0
    } else {
        ctx.log2_q() - 1.0 - noise_bits
    };
    if budget < MIN_BUDGET_BITS {
        return Err(Error::DecryptionFailure {
            budget_bits: budget,
            noise_bits,
        });
    }
    let coeffs = per_coeff.into_iter().map(|(m, _)| m).collect();
    Ok(Decrypted {
        plaintext: Plaintext::from_poly(
            CoeffVector::from_reduced(coeffs, t, Domain::Coefficient),
            ct.encoding(),
        ),
        noise_budget_bits: budget,
    })
}
