use serde::{Deserialize, Serialize};

use super::modulus::Modulus;
use super::ntt::NttTables;
use crate::error::{Error, Result};

/// Representation of a ring element: coefficients, or evaluations at the odd
/// powers of `ψ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    Coefficient,
    Ntt,
}

/// One limb of a ring element: `n` residues modulo a single prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffVector {
    coeffs: Vec<u64>,
    modulus: u64,
    domain: Domain,
}

impl CoeffVector {
    pub fn new(coeffs: Vec<u64>, modulus: &Modulus, domain: Domain) -> Result<Self> {
        if !coeffs.len().is_power_of_two() {
            return Err(Error::Usage(format!(
                "vector length {} is not a power of two",
                coeffs.len()
            )));
        }
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= modulus.value()) {
            return Err(Error::OutOfRange {
                value: bad,
                modulus: modulus.value(),
            });
        }
        Ok(Self {
            coeffs,
            modulus: modulus.value(),
            domain,
        })
    }

    pub fn zero(n: usize, modulus: &Modulus, domain: Domain) -> Self {
        Self {
            coeffs: vec![0; n],
            modulus: modulus.value(),
            domain,
        }
    }

    /// Caller guarantees every entry is already reduced.
    pub(crate) fn from_reduced(coeffs: Vec<u64>, modulus: u64, domain: Domain) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < modulus));
        Self {
            coeffs,
            modulus,
            domain,
        }
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    fn check_tables(&self, tables: &NttTables) -> Result<()> {
        if tables.n() != self.n() || tables.modulus().value() != self.modulus {
            return Err(Error::Usage(format!(
                "transform tables for (n={}, q={}) applied to vector with (n={}, q={})",
                tables.n(),
                tables.modulus().value(),
                self.n(),
                self.modulus
            )));
        }
        Ok(())
    }

    pub(crate) fn switch_to_ntt(&mut self, tables: &NttTables) {
        if self.domain == Domain::Coefficient {
            tables.forward(&mut self.coeffs);
            self.domain = Domain::Ntt;
        }
    }

    pub(crate) fn switch_to_coeff(&mut self, tables: &NttTables) {
        if self.domain == Domain::Ntt {
            tables.inverse(&mut self.coeffs);
            self.domain = Domain::Coefficient;
        }
    }
}

fn check_compatible(a: &CoeffVector, b: &CoeffVector) -> Result<()> {
    if a.n() != b.n() || a.modulus != b.modulus {
        return Err(Error::Usage(format!(
            "operands differ: (n={}, q={}) vs (n={}, q={})",
            a.n(),
            a.modulus,
            b.n(),
            b.modulus
        )));
    }
    Ok(())
}

pub fn ntt_forward(v: &CoeffVector, tables: &NttTables) -> Result<CoeffVector> {
    v.check_tables(tables)?;
    if v.domain != Domain::Coefficient {
        return Err(Error::Usage("forward NTT of an NTT-domain vector".into()));
    }
    let mut out = v.clone();
    out.switch_to_ntt(tables);
    Ok(out)
}

pub fn ntt_inverse(v: &CoeffVector, tables: &NttTables) -> Result<CoeffVector> {
    v.check_tables(tables)?;
    if v.domain != Domain::Ntt {
        return Err(Error::Usage("inverse NTT of a coefficient-domain vector".into()));
    }
    let mut out = v.clone();
    out.switch_to_coeff(tables);
    Ok(out)
}

/// Product in `Z_q[X]/(X^n + 1)` via forward NTT, pointwise product, inverse NTT.
pub fn negacyclic_mul(a: &CoeffVector, b: &CoeffVector, tables: &NttTables) -> Result<CoeffVector> {
    check_compatible(a, b)?;
    if a.domain != Domain::Coefficient || b.domain != Domain::Coefficient {
        return Err(Error::Usage("negacyclic_mul expects coefficient-domain operands".into()));
    }
    let fa = ntt_forward(a, tables)?;
    let fb = ntt_forward(b, tables)?;
    let mut prod = pointwise_mul(&fa, &fb, tables.modulus())?;
    prod.switch_to_coeff(tables);
    Ok(prod)
}

/// Entrywise `(a + b) mod q`; both operands must share a domain.
pub fn poly_add_mod(a: &CoeffVector, b: &CoeffVector, m: &Modulus) -> Result<CoeffVector> {
    check_compatible(a, b)?;
    if a.domain != b.domain {
        return Err(Error::Usage(
            "cannot add coefficient-domain and NTT-domain vectors".into(),
        ));
    }
    if m.value() != a.modulus {
        return Err(Error::Usage("modulus does not match operands".into()));
    }
    let coeffs = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(&x, &y)| m.add(x, y))
        .collect();
    Ok(CoeffVector::from_reduced(coeffs, a.modulus, a.domain))
}

/// Entrywise product of two NTT-domain vectors.
pub fn pointwise_mul(a: &CoeffVector, b: &CoeffVector, m: &Modulus) -> Result<CoeffVector> {
    check_compatible(a, b)?;
    if a.domain != Domain::Ntt || b.domain != Domain::Ntt {
        return Err(Error::Usage("pointwise product needs NTT-domain operands".into()));
    }
    let coeffs = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(&x, &y)| m.mul(x, y))
        .collect();
    Ok(CoeffVector::from_reduced(coeffs, a.modulus, Domain::Ntt))
}
