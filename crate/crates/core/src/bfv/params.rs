use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::parse_toml_file;
use crate::error::{Error, Result};

/// Width and count of a family of RNS primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimbSpec {
    pub bits: u32,
    pub count: usize,
}

/// The BSGS shape recorded next to the scheme parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatMulShape {
    /// Number of matrix columns the caller cares about (`k`).
    pub k: usize,
    /// Giant-step count `g̃`.
    pub giant: usize,
    /// Baby-step count `b̃`.
    pub baby: usize,
}

/// BFV parameter set as read from a `.cfg` file.
///
/// ```toml
/// n = 4096            # ring dimension, power of two
/// t = 65537           # plaintext modulus, t ≡ 1 (mod 2n)
/// dnum = 2            # key-switching digits
/// seed = 1            # default entropy for keys and encryption
///
/// [q_limbs]           # ciphertext modulus Q
/// bits = 60
/// count = 4
///
/// [p_limbs]           # special modulus P
/// bits = 60
/// count = 2
///
/// [matmul]            # optional BSGS shape
/// k = 4
/// giant = 2
/// baby = 2
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeParams {
    pub n: usize,
    pub t: u64,
    pub dnum: usize,
    #[serde(default)]
    pub seed: u64,
    pub q_limbs: LimbSpec,
    pub p_limbs: LimbSpec,
    #[serde(default)]
    pub matmul: Option<MatMulShape>,
}

impl HeParams {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let params: Self = parse_toml_file(path.as_ref())?;
        params.validate()?;
        Ok(params)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let params: Self = crate::config::parse_toml_str(text, Path::new("<inline>"))?;
        params.validate()?;
        Ok(params)
    }

    /// Desk-scale preset: n = 2^12, four 60-bit ciphertext limbs.
    pub fn desk() -> Self {
        Self {
            n: 1 << 12,
            t: 65_537,
            dnum: 2,
            seed: 1,
            q_limbs: LimbSpec { bits: 60, count: 4 },
            p_limbs: LimbSpec { bits: 60, count: 2 },
            matmul: Some(MatMulShape {
                k: 4,
                giant: 2,
                baby: 2,
            }),
        }
    }

    /// The OMR parameter set: n = 2^16, t = 786,433, log Q = 1,140,
    /// log PQ = 1,740 with 60-bit limbs, g̃ = 23, b̃ = 46.
    pub fn sophomr() -> Self {
        Self {
            n: 1 << 16,
            t: 786_433,
            dnum: 2,
            seed: 1,
            q_limbs: LimbSpec { bits: 60, count: 19 },
            p_limbs: LimbSpec { bits: 60, count: 10 },
            matmul: Some(MatMulShape {
                k: 50,
                giant: 23,
                baby: 46,
            }),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 4 || !self.n.is_power_of_two() {
            return Err(Error::Config(format!(
                "n = {} must be a power of two >= 4",
                self.n
            )));
        }
        let two_n = 2 * self.n as u64;
        if self.t < 2 || (self.t - 1) % two_n != 0 {
            return Err(Error::Config(format!(
                "t = {} must satisfy t ≡ 1 (mod 2n = {two_n}) for slot encoding",
                self.t
            )));
        }
        if !crate::modring::is_prime(self.t) {
            return Err(Error::Config(format!("t = {} is not prime", self.t)));
        }
        if self.q_limbs.count == 0 || self.p_limbs.count == 0 {
            return Err(Error::Config("need at least one Q limb and one P limb".into()));
        }
        if self.dnum == 0 || self.dnum > self.q_limbs.count {
            return Err(Error::Config(format!(
                "dnum = {} must lie in [1, {}]",
                self.dnum, self.q_limbs.count
            )));
        }
        if let Some(shape) = &self.matmul {
            if shape.giant == 0 || shape.baby == 0 {
                return Err(Error::Config("giant and baby step counts must be >= 1".into()));
            }
        }
        Ok(())
    }

    pub fn slot_count(&self) -> usize {
        self.n / 2
    }

    /// Sum of the configured limb widths of `Q`.
    pub fn log_q(&self) -> u32 {
        self.q_limbs.bits * self.q_limbs.count as u32
    }

    pub fn log_pq(&self) -> u32 {
        self.log_q() + self.p_limbs.bits * self.p_limbs.count as u32
    }

    /// Contiguous partition of the Q limbs into `dnum` digits, larger digits first.
    pub fn digit_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let l = self.q_limbs.count;
        let base = l / self.dnum;
        let extra = l % self.dnum;
        let mut start = 0;
        (0..self.dnum)
            .map(|j| {
                let len = base + usize::from(j < extra);
                let r = start..start + len;
                start += len;
                r
            })
            .collect()
    }
}
