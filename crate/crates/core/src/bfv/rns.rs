use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::modring::{CoeffVector, Domain, NttTables};

/// A ring element stored as one [`CoeffVector`] per RNS prime, in the order of
/// the basis it was built over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RnsPoly {
    limbs: Vec<CoeffVector>,
}

impl RnsPoly {
    pub fn new(limbs: Vec<CoeffVector>) -> Result<Self> {
        if let Some(first) = limbs.first() {
            if limbs
                .iter()
                .any(|l| l.n() != first.n() || l.domain() != first.domain())
            {
                return Err(Error::Usage("limbs disagree on length or domain".into()));
            }
        }
        Ok(Self { limbs })
    }

    pub fn zero(basis: &[NttTables], domain: Domain) -> Self {
        Self {
            limbs: basis
                .iter()
                .map(|t| CoeffVector::zero(t.n(), t.modulus(), domain))
                .collect(),
        }
    }

    /// Reduces the same signed coefficient vector into every limb.
    pub fn from_signed(coeffs: &[i64], basis: &[NttTables]) -> Self {
        Self {
            limbs: basis
                .iter()
                .map(|t| {
                    let m = t.modulus();
                    CoeffVector::from_reduced(
                        coeffs.iter().map(|&c| m.reduce_i64(c)).collect(),
                        m.value(),
                        Domain::Coefficient,
                    )
                })
                .collect(),
        }
    }

    pub fn limbs(&self) -> &[CoeffVector] {
        &self.limbs
    }

    pub(crate) fn limbs_mut(&mut self) -> &mut [CoeffVector] {
        &mut self.limbs
    }

    pub fn into_limbs(self) -> Vec<CoeffVector> {
        self.limbs
    }

    pub fn limb_count(&self) -> usize {
        self.limbs.len()
    }

    pub fn n(&self) -> usize {
        self.limbs.first().map_or(0, |l| l.n())
    }

    pub fn domain(&self) -> Domain {
        self.limbs.first().map_or(Domain::Coefficient, |l| l.domain())
    }

    pub fn moduli(&self) -> Vec<u64> {
        self.limbs.iter().map(|l| l.modulus()).collect()
    }

    fn check_basis(&self, basis: &[NttTables]) {
        debug_assert_eq!(self.limbs.len(), basis.len());
        debug_assert!(self
            .limbs
            .iter()
            .zip(basis)
            .all(|(l, t)| l.modulus() == t.modulus().value()));
    }

    pub fn to_ntt(&mut self, basis: &[NttTables]) {
        self.check_basis(basis);
        self.limbs
            .par_iter_mut()
            .zip(basis)
            .for_each(|(l, t)| l.switch_to_ntt(t));
    }

    pub fn to_coeff(&mut self, basis: &[NttTables]) {
        self.check_basis(basis);
        self.limbs
            .par_iter_mut()
            .zip(basis)
            .for_each(|(l, t)| l.switch_to_coeff(t));
    }

    pub fn to_domain(&mut self, domain: Domain, basis: &[NttTables]) {
        match domain {
            Domain::Ntt => self.to_ntt(basis),
            Domain::Coefficient => self.to_coeff(basis),
        }
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.moduli() != other.moduli() || self.n() != other.n() {
            return Err(Error::Usage("RNS polynomials have different limb sets".into()));
        }
        if self.domain() != other.domain() {
            return Err(Error::Usage("RNS polynomials are in different domains".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self, basis: &[NttTables]) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip_map(other, basis, |m, a, b| m.add(a, b)))
    }

    pub fn sub(&self, other: &Self, basis: &[NttTables]) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip_map(other, basis, |m, a, b| m.sub(a, b)))
    }

    /// Pointwise product; both operands must be in the NTT domain.
    pub fn mul_ntt(&self, other: &Self, basis: &[NttTables]) -> Result<Self> {
        self.check_same_shape(other)?;
        if self.domain() != Domain::Ntt {
            return Err(Error::Usage("pointwise product needs NTT-domain operands".into()));
        }
        Ok(self.zip_map(other, basis, |m, a, b| m.mul(a, b)))
    }

    pub fn neg(&self, basis: &[NttTables]) -> Self {
        self.check_basis(basis);
        let limbs = self
            .limbs
            .par_iter()
            .zip(basis)
            .map(|(l, t)| {
                let m = t.modulus();
                CoeffVector::from_reduced(
                    l.coeffs().iter().map(|&c| m.neg(c)).collect(),
                    m.value(),
                    l.domain(),
                )
            })
            .collect();
        Self { limbs }
    }

    fn zip_map(
        &self,
        other: &Self,
        basis: &[NttTables],
        f: impl Fn(&crate::modring::Modulus, u64, u64) -> u64 + Sync,
    ) -> Self {
        self.check_basis(basis);
        let limbs = self
            .limbs
            .par_iter()
            .zip(other.limbs.par_iter())
            .zip(basis)
            .map(|((a, b), t)| {
                let m = t.modulus();
                CoeffVector::from_reduced(
                    a.coeffs()
                        .iter()
                        .zip(b.coeffs())
                        .map(|(&x, &y)| f(m, x, y))
                        .collect(),
                    m.value(),
                    a.domain(),
                )
            })
            .collect();
        Self { limbs }
    }

    /// Keeps the first `count` limbs.
    pub(crate) fn truncate(&mut self, count: usize) {
        self.limbs.truncate(count);
    }
}
