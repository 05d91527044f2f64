//! Slot packing. With `t ≡ 1 (mod 2n)` the plaintext ring splits into `n`
//! slots, arranged as two rows of `u = n/2`. A logical vector of length `u`
//! is written into both rows, so rotations act on it as a flat `u`-cycle.

use rayon::prelude::*;

use super::context::HeContext;
use super::rns::RnsPoly;
use crate::error::{Error, Result};
use crate::modring::{CoeffVector, Domain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Encoding {
    Slots,
    Coefficients,
}

/// A polynomial of `R_t` together with how its contents are to be read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plaintext {
    poly: CoeffVector,
    encoding: Encoding,
}

impl Plaintext {
    pub fn from_coefficients(coeffs: Vec<u64>, ctx: &HeContext) -> Result<Self> {
        if coeffs.len() > ctx.n() {
            return Err(Error::Usage(format!(
                "{} coefficients exceed ring degree {}",
                coeffs.len(),
                ctx.n()
            )));
        }
        let mut padded = coeffs;
        padded.resize(ctx.n(), 0);
        Ok(Self {
            poly: CoeffVector::new(padded, ctx.t(), Domain::Coefficient)?,
            encoding: Encoding::Coefficients,
        })
    }

    pub(crate) fn from_poly(poly: CoeffVector, encoding: Encoding) -> Self {
        Self { poly, encoding }
    }

    pub fn poly(&self) -> &CoeffVector {
        &self.poly
    }

    pub fn encoding(&self) -> Encoding {
        self.encoding
    }

    pub fn is_zero(&self) -> bool {
        self.poly.coeffs().iter().all(|&c| c == 0)
    }
}

/// Packs up to `u` values (zero padded) into both slot rows.
pub fn encode(values: &[u64], ctx: &HeContext) -> Result<Plaintext> {
    let u = ctx.slot_count();
    if values.len() > u {
        return Err(Error::Usage(format!(
            "{} values exceed the {u} available slots",
            values.len()
        )));
    }
    let t = ctx.t().value();
    if let Some(&bad) = values.iter().find(|&&v| v >= t) {
        return Err(Error::OutOfRange {
            value: bad,
            modulus: t,
        });
    }
    let index = ctx.slot_index();
    let mut evals = vec![0u64; ctx.n()];
    for (i, &v) in values.iter().enumerate() {
        evals[index[i]] = v;
        evals[index[u + i]] = v;
    }
    ctx.t_tables().inverse(&mut evals);
    Ok(Plaintext {
        poly: CoeffVector::from_reduced(evals, t, Domain::Coefficient),
        encoding: Encoding::Slots,
    })
}

/// Reads the `u` values of slot row 0.
pub fn decode(pt: &Plaintext, ctx: &HeContext) -> Result<Vec<u64>> {
    if pt.encoding != Encoding::Slots {
        return Err(Error::Usage("decode of a coefficient-encoded plaintext".into()));
    }
    Ok(decode_rows(pt, ctx).0)
}

/// Both slot rows of any plaintext, regardless of its encoding flag.
pub fn decode_rows(pt: &Plaintext, ctx: &HeContext) -> (Vec<u64>, Vec<u64>) {
    let mut evals = pt.poly.coeffs().to_vec();
    ctx.t_tables().forward(&mut evals);
    let u = ctx.slot_count();
    let index = ctx.slot_index();
    let row0 = (0..u).map(|i| evals[index[i]]).collect();
    let row1 = (0..u).map(|i| evals[index[u + i]]).collect();
    (row0, row1)
}

/// A slot-encoded plaintext lifted into every Q limb and transformed, ready
/// for repeated plaintext-ciphertext products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreparedPlaintext {
    lifted: RnsPoly,
    zero: bool,
}

impl PreparedPlaintext {
    pub fn new(pt: &Plaintext, ctx: &HeContext) -> Result<Self> {
        if pt.encoding != Encoding::Slots {
            return Err(Error::Usage(
                "plaintext-ciphertext product expects a slot-encoded plaintext".into(),
            ));
        }
        let t = ctx.t();
        // centered lift keeps the noise growth at ||pt||_inf <= t/2
        let centered: Vec<i64> = pt.poly.coeffs().iter().map(|&c| t.center(c)).collect();
        let mut lifted = RnsPoly::from_signed(&centered, ctx.q_tables());
        lifted
            .limbs_mut()
            .par_iter_mut()
            .zip(ctx.q_tables())
            .for_each(|(l, tab)| l.switch_to_ntt(tab));
        Ok(Self {
            lifted,
            zero: pt.is_zero(),
        })
    }

    pub(crate) fn lifted(&self) -> &RnsPoly {
        &self.lifted
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }
}
