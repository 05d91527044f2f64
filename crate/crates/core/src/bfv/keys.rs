use super::context::HeContext;
use super::galois::permute_signed;
use super::rns::RnsPoly;
use super::sampling::{centered_binomial, rng_from_seed, ternary, uniform_ntt};
use crate::error::{Error, Result};
use crate::modring::{CoeffVector, Domain};

const TAG_SECRET: u64 = 0x5345_4352;
const TAG_ROTATION: u64 = 0x524f_5441;

/// Ternary secret `s` with coefficients in {-1, 0, 1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecretKey {
    coeffs: Vec<i64>,
    /// `s` over the full PQ basis, NTT domain.
    ntt_pq: RnsPoly,
}

impl SecretKey {
    pub fn from_coefficients(coeffs: Vec<i64>, ctx: &HeContext) -> Result<Self> {
        if coeffs.len() != ctx.n() {
            return Err(Error::Usage(format!(
                "secret has {} coefficients, ring degree is {}",
                coeffs.len(),
                ctx.n()
            )));
        }
        if coeffs.iter().any(|c| !(-1..=1).contains(c)) {
            return Err(Error::Usage("secret key coefficients must be ternary".into()));
        }
        let mut ntt_pq = RnsPoly::from_signed(&coeffs, ctx.pq_tables());
        ntt_pq.to_ntt(ctx.pq_tables());
        Ok(Self { coeffs, ntt_pq })
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coeffs
    }

    /// `s` over the Q limbs, NTT domain.
    pub(crate) fn ntt_q(&self, ctx: &HeContext) -> RnsPoly {
        let mut s = self.ntt_pq.clone();
        s.truncate(ctx.q_count());
        s
    }

    pub(crate) fn ntt_pq(&self) -> &RnsPoly {
        &self.ntt_pq
    }
}

/// Secret key generation from a seed. The same seed always yields the same key.
pub fn keygen(ctx: &HeContext, seed: u64) -> SecretKey {
    let mut rng = rng_from_seed(seed, TAG_SECRET);
    let coeffs = ternary(ctx.n(), &mut rng);
    SecretKey::from_coefficients(coeffs, ctx).expect("sampled secret is ternary")
}

/// Hybrid key-switching key for one Galois element.
///
/// Digit `j` covers the contiguous Q-limb range `D_j` and holds `(b_j, a_j)`
/// over PQ in the NTT domain with
/// `b_j = -a_j·s + e_j + P·[Q/Q_j]·[(Q/Q_j)^-1]_{Q_j}·σ_g(s)`.
/// The gadget factor reduces to `P mod q_i` on limbs of `D_j` and to zero on
/// every other limb.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationKey {
    galois_element: usize,
    digits: Vec<(RnsPoly, RnsPoly)>,
}

impl RotationKey {
    pub(crate) fn from_parts(galois_element: usize, digits: Vec<(RnsPoly, RnsPoly)>) -> Self {
        Self {
            galois_element,
            digits,
        }
    }

    pub fn galois_element(&self) -> usize {
        self.galois_element
    }

    pub fn digits(&self) -> &[(RnsPoly, RnsPoly)] {
        &self.digits
    }

    pub fn dnum(&self) -> usize {
        self.digits.len()
    }

    /// Bytes of key material: `2 · dnum · |PQ limbs| · n` 64-bit words.
    pub fn payload_bytes(&self) -> usize {
        self.digits
            .iter()
            .map(|(b, a)| (b.limb_count() + a.limb_count()) * b.n() * 8)
            .sum()
    }
}

/// Key for the rotation of both slot rows left by `shift`.
pub fn gen_rotation_key(ctx: &HeContext, sk: &SecretKey, shift: usize, seed: u64) -> Result<RotationKey> {
    let shift = shift % ctx.slot_count();
    if shift == 0 {
        return Err(Error::Usage(
            "rotation by 0 is the identity and needs no key".into(),
        ));
    }
    gen_galois_key(ctx, sk, ctx.galois_element(shift), seed)
}

/// Key-switching key from `σ_g(s)` back to `s`.
pub fn gen_galois_key(ctx: &HeContext, sk: &SecretKey, galois_element: usize, seed: u64) -> Result<RotationKey> {
    let two_n = 2 * ctx.n();
    if galois_element % 2 == 0 || galois_element >= two_n {
        return Err(Error::Usage(format!(
            "Galois element {galois_element} must be odd and below {two_n}"
        )));
    }
    let basis = ctx.pq_tables();
    let mut rng = rng_from_seed(seed, TAG_ROTATION ^ ((galois_element as u64) << 32));

    let mut s_g = RnsPoly::from_signed(&permute_signed(sk.coefficients(), galois_element), basis);
    s_g.to_ntt(basis);

    let q_count = ctx.q_count();
    let mut digits = Vec::with_capacity(ctx.digits().len());
    for range in ctx.digits() {
        let a = uniform_ntt(basis, &mut rng);
        let mut e = RnsPoly::from_signed(&centered_binomial(ctx.n(), &mut rng), basis);
        e.to_ntt(basis);

        // gadget · σ_g(s): nonzero only on this digit's Q limbs
        let gadget_limbs: Vec<CoeffVector> = basis
            .iter()
            .zip(s_g.limbs())
            .enumerate()
            .map(|(i, (t, sg))| {
                let m = t.modulus();
                let factor = if i < q_count && range.contains(&i) {
                    ctx.p_mod_q()[i]
                } else {
                    0
                };
                CoeffVector::from_reduced(
                    sg.coeffs().iter().map(|&c| m.mul(c, factor)).collect(),
                    m.value(),
                    Domain::Ntt,
                )
            })
            .collect();
        let gadget = RnsPoly::new(gadget_limbs)?;

        let a_s = a.mul_ntt(sk.ntt_pq(), basis)?;
        let b = e.sub(&a_s, basis)?.add(&gadget, basis)?;
        digits.push((b, a));
    }
    Ok(RotationKey::from_parts(galois_element, digits))
}
