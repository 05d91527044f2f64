use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{parse_toml_file, parse_toml_str};
use crate::error::{Error, Result};

/// Resource totals of the target FPGA.
///
/// ```toml
/// dsp = 9024
/// bram = 2016     # 36 Kb blocks
/// uram = 960      # 288 Kb blocks
/// lut = 1304000
/// ff = 2607000
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FpgaBudget {
    pub dsp: u64,
    pub bram: u64,
    pub uram: u64,
    pub lut: u64,
    pub ff: u64,
}

impl FpgaBudget {
    /// Alveo U55C.
    pub fn u55c() -> Self {
        Self {
            dsp: 9024,
            bram: 2016,
            uram: 960,
            lut: 1_304_000,
            ff: 2_607_000,
        }
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let b: Self = parse_toml_file(path.as_ref())?;
        b.validate()?;
        Ok(b)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let b: Self = parse_toml_str(text, Path::new("<inline>"))?;
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("dsp", self.dsp),
            ("bram", self.bram),
            ("uram", self.uram),
            ("lut", self.lut),
            ("ff", self.ff),
        ];
        match fields.iter().find(|(_, v)| *v == 0) {
            Some((name, _)) => Err(Error::Config(format!("budget {name} must be positive"))),
            None => Ok(()),
        }
    }

    /// LUTs and FFs are not checked: the MatMul datapath is DSP- and
    /// memory-bound long before it runs out of logic.
    pub fn admits(&self, dsp: u64, bram: u64, uram: u64) -> bool {
        dsp <= self.dsp && bram <= self.bram && uram <= self.uram
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_file_matches_preset() {
        let text = include_str!("../../../../budgets/u55c.cfg");
        assert_eq!(FpgaBudget::from_toml_str(text).unwrap(), FpgaBudget::u55c());
    }

    #[test]
    fn zero_total_is_rejected() {
        let text = "dsp = 0\nbram = 1\nuram = 1\nlut = 1\nff = 1\n";
        assert!(matches!(FpgaBudget::from_toml_str(text), Err(Error::Config(_))));
    }

    #[test]
    fn admits_is_inclusive() {
        let b = FpgaBudget::u55c();
        assert!(b.admits(9024, 2016, 960));
        assert!(!b.admits(9025, 0, 0));
        assert!(!b.admits(0, 0, 961));
    }
}
