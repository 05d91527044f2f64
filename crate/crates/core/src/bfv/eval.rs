use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use super::cipher::Ciphertext;
use super::context::HeContext;
use super::encoding::{Plaintext, PreparedPlaintext};
use super::galois::apply_to_limb;
use super::keys::RotationKey;
use super::rns::RnsPoly;
use crate::error::{Error, Result};
use crate::modring::{CoeffVector, Domain};

/// Snapshot of the evaluator's operation counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OpCounts {
    pub ccadd: u64,
    pub pcmul: u64,
    pub rot: u64,
    pub apply_galois: u64,
    pub key_switch: u64,
}

#[derive(Debug, Default)]
struct OpCounters {
    ccadd: AtomicU64,
    pcmul: AtomicU64,
    rot: AtomicU64,
    apply_galois: AtomicU64,
    key_switch: AtomicU64,
}

/// Output of [`Evaluator::apply_galois`]: decryptable under `σ_g(s)` until
/// switched back with the matching key.
#[derive(Debug, Clone)]
pub struct GaloisCiphertext {
    ct: Ciphertext,
    galois_element: usize,
}

impl GaloisCiphertext {
    pub fn galois_element(&self) -> usize {
        self.galois_element
    }

    pub fn ciphertext(&self) -> &Ciphertext {
        &self.ct
    }
}

/// Homomorphic operators over one parameter set, with per-operator counters.
#[derive(Debug)]
pub struct Evaluator<'a> {
    ctx: &'a HeContext,
    counters: OpCounters,
}

impl<'a> Evaluator<'a> {
    pub fn new(ctx: &'a HeContext) -> Self {
        Self {
            ctx,
            counters: OpCounters::default(),
        }
    }

    pub fn context(&self) -> &'a HeContext {
        self.ctx
    }

    pub fn counts(&self) -> OpCounts {
        let c = &self.counters;
        OpCounts {
            ccadd: c.ccadd.load(Ordering::Relaxed),
            pcmul: c.pcmul.load(Ordering::Relaxed),
            rot: c.rot.load(Ordering::Relaxed),
            apply_galois: c.apply_galois.load(Ordering::Relaxed),
            key_switch: c.key_switch.load(Ordering::Relaxed),
        }
    }

    fn check_ct(&self, ct: &Ciphertext) -> Result<()> {
        if ct.c0().n() != self.ctx.n() || ct.moduli() != self.ctx.q_primes() {
            return Err(Error::Usage("ciphertext does not match the parameter set".into()));
        }
        Ok(())
    }

    /// CCadd: limb-wise sum of corresponding components.
    pub fn cc_add(&self, a: &Ciphertext, b: &Ciphertext) -> Result<Ciphertext> {
        self.check_ct(a)?;
        if a.moduli() != b.moduli() || a.c0().n() != b.c0().n() {
            return Err(Error::Usage("ciphertexts carry different limb sets".into()));
        }
        if a.domain() != b.domain() {
            return Err(Error::Usage("ciphertexts are in different domains".into()));
        }
        self.counters.ccadd.fetch_add(1, Ordering::Relaxed);
        let basis = self.ctx.q_tables();
        Ok(Ciphertext::derived(
            a.c0().add(b.c0(), basis)?,
            a.c1().add(b.c1(), basis)?,
            a.encoding(),
        ))
    }

    /// PCmul with a slot-encoded plaintext.
    pub fn pc_mul(&self, pt: &Plaintext, ct: &Ciphertext) -> Result<Ciphertext> {
        let prepared = PreparedPlaintext::new(pt, self.ctx)?;
        self.pc_mul_prepared(&prepared, ct)
    }

    /// PCmul with a plaintext already lifted to the NTT domain. The result
    /// stays in the domain of `ct`.
    pub fn pc_mul_prepared(&self, pt: &PreparedPlaintext, ct: &Ciphertext) -> Result<Ciphertext> {
        self.check_ct(ct)?;
        self.counters.pcmul.fetch_add(1, Ordering::Relaxed);
        let basis = self.ctx.q_tables();
        let domain = ct.domain();
        let ntt = ct.in_domain(Domain::Ntt, self.ctx);
        let (c0, c1) = ntt.into_parts();
        let (p0, p1) = rayon::join(
            || c0.mul_ntt(pt.lifted(), basis),
            || c1.mul_ntt(pt.lifted(), basis),
        );
        let (mut p0, mut p1) = (p0?, p1?);
        p0.to_domain(domain, basis);
        p1.to_domain(domain, basis);
        Ok(Ciphertext::derived(p0, p1, ct.encoding()))
    }

    /// ApplyGalois: `X → X^g` on both components.
    pub fn apply_galois(&self, ct: &Ciphertext, galois_element: usize) -> Result<GaloisCiphertext> {
        self.check_ct(ct)?;
        let two_n = 2 * self.ctx.n();
        if galois_element % 2 == 0 || galois_element >= two_n {
            return Err(Error::Usage(format!(
                "Galois element {galois_element} must be odd and below {two_n}"
            )));
        }
        self.counters.apply_galois.fetch_add(1, Ordering::Relaxed);
        let basis = self.ctx.q_tables();
        let permute = |p: &RnsPoly| {
            let limbs: Vec<CoeffVector> = p
                .limbs()
                .par_iter()
                .zip(basis)
                .map(|(l, t)| apply_to_limb(l, galois_element, t.modulus()))
                .collect();
            RnsPoly::new(limbs).expect("permutation preserves shape")
        };
        Ok(GaloisCiphertext {
            ct: Ciphertext::derived(permute(ct.c0()), permute(ct.c1()), ct.encoding()),
            galois_element,
        })
    }

    /// KeySwitch: hybrid RNS key switching from `σ_g(s)` back to `s`.
    ///
    /// Per digit, the digit's limbs of `c1` are extended to PQ (ModUp) and
    /// multiplied with the key; the accumulated pair is divided by `P`
    /// (ModDown) and added onto `(c0, 0)`.
    pub fn key_switch(&self, gct: &GaloisCiphertext, key: &RotationKey) -> Result<Ciphertext> {
        if key.galois_element() != gct.galois_element {
            return Err(Error::Usage(format!(
                "key for Galois element {} applied to a ciphertext permuted by {}",
                key.galois_element(),
                gct.galois_element
            )));
        }
        let ctx = self.ctx;
        if key.dnum() != ctx.digits().len() {
            return Err(Error::Usage("key digit count does not match the parameters".into()));
        }
        self.counters.key_switch.fetch_add(1, Ordering::Relaxed);

        let q_basis = ctx.q_tables();
        let pq_basis = ctx.pq_tables();
        let q_count = ctx.q_count();
        let domain = gct.ct.domain();
        let coeff_ct = gct.ct.in_domain(Domain::Coefficient, ctx);
        let (c0, c1) = coeff_ct.into_parts();

        let mut acc0 = RnsPoly::zero(pq_basis, Domain::Ntt);
        let mut acc1 = RnsPoly::zero(pq_basis, Domain::Ntt);
        for (j, (range, (kb, ka))) in ctx.digits().iter().zip(key.digits()).enumerate() {
            let inputs: Vec<&[u64]> = c1.limbs()[range.clone()].iter().map(|l| l.coeffs()).collect();
            let mut extended = ctx.digit_up(j).convert(&inputs).into_iter();
            let limbs: Vec<CoeffVector> = pq_basis
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    if range.contains(&i) {
                        c1.limbs()[i].clone()
                    } else {
                        CoeffVector::from_reduced(
                            extended.next().expect("one output per complement limb"),
                            t.modulus().value(),
                            Domain::Coefficient,
                        )
                    }
                })
                .collect();
            let mut up = RnsPoly::new(limbs)?;
            up.to_ntt(pq_basis);
            acc0 = acc0.add(&up.mul_ntt(kb, pq_basis)?, pq_basis)?;
            acc1 = acc1.add(&up.mul_ntt(ka, pq_basis)?, pq_basis)?;
        }

        let (d0, d1) = rayon::join(|| self.mod_down(acc0), || self.mod_down(acc1));
        let mut out0 = c0.add(&d0, q_basis)?;
        let mut out1 = d1;
        debug_assert_eq!(out1.limb_count(), q_count);
        out0.to_domain(domain, q_basis);
        out1.to_domain(domain, q_basis);
        Ok(Ciphertext::derived(out0, out1, gct.ct.encoding()))
    }

    /// `round(x / P)` over Q from an NTT-domain value over PQ (up to a small
    /// additive error from the approximate base conversion).
    fn mod_down(&self, mut x: RnsPoly) -> RnsPoly {
        let ctx = self.ctx;
        let q_count = ctx.q_count();
        x.to_coeff(ctx.pq_tables());
        let p_part: Vec<&[u64]> = x.limbs()[q_count..].iter().map(|l| l.coeffs()).collect();
        let converted = ctx.p_to_q().convert(&p_part);
        let limbs: Vec<CoeffVector> = x.limbs()[..q_count]
            .par_iter()
            .zip(converted)
            .zip(ctx.q_tables().par_iter().zip(ctx.p_inv_mod_q()))
            .map(|((limb, conv), (t, &p_inv))| {
                let q = t.modulus();
                CoeffVector::from_reduced(
                    limb.coeffs()
                        .iter()
                        .zip(conv)
                        .map(|(&a, b)| q.mul(q.sub(a, b), p_inv))
                        .collect(),
                    q.value(),
                    Domain::Coefficient,
                )
            })
            .collect();
        RnsPoly::new(limbs).expect("ModDown preserves shape")
    }

    /// Rot: slot rotation left by `shift` (ApplyGalois then KeySwitch).
    /// Rotation by a multiple of `u` is the identity and ignores `key`.
    pub fn rotate(&self, ct: &Ciphertext, shift: usize, key: Option<&RotationKey>) -> Result<Ciphertext> {
        self.check_ct(ct)?;
        let shift = shift % self.ctx.slot_count();
        if shift == 0 {
            return Ok(ct.clone());
        }
        let g = self.ctx.galois_element(shift);
        let key = key
            .filter(|k| k.galois_element() == g)
            .ok_or(Error::MissingKey { shift })?;
        self.counters.rot.fetch_add(1, Ordering::Relaxed);
        let permuted = self.apply_galois(ct, g)?;
        self.key_switch(&permuted, key)
    }
}
