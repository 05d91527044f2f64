//! Per-operator synthesis figures.
//!
//! A fixture lists measured anchor entries for each operator. Lookups at an
//! anchor return it unchanged; any other grid point is derived from the
//! nearest anchor:
//!
//! * CCadd and PCmul: latency scales with `pc_anchor / pc`, every resource
//!   with `pc / pc_anchor` (rounded up).
//! * Rot: the NTT/INTT share of the latency scales with `pb_anchor / pb`
//!   and the rest with `pc_anchor / pc`; DSPs split the same way with their
//!   own share. BRAM sits in the NTT units and scales with `pb`. URAM holds
//!   key and twiddle buffers, whose depth does not depend on parallelism.
//!
//! ```toml
//! [scaling]
//! rot_ntt_latency_share = 0.9
//! rot_ntt_dsp_share = 0.75
//!
//! [[ccadd]]
//! pc = 16
//! latency_ms = 0.80
//! dsp = 1
//!
//! [[rot]]
//! pc = 16
//! pb = 64
//! latency_ms = 31.35
//! dsp = 5123
//! bram = 1536
//! uram = 313
//!
//! [memory]
//! transfer_buffers = 3
//! double_buffered = true
//! uram_bits = 288000
//! matrix_buffer_bits = 75000000
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{parse_toml_file, parse_toml_str};
use crate::error::{Error, Result};

/// Latency and resources of one operator instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorCost {
    pub latency_ms: f64,
    pub dsp: u64,
    pub bram: u64,
    pub uram: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PcAnchor {
    pub pc: usize,
    pub latency_ms: f64,
    pub dsp: u64,
    #[serde(default)]
    pub bram: u64,
    #[serde(default)]
    pub uram: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotAnchor {
    pub pc: usize,
    pub pb: usize,
    pub latency_ms: f64,
    pub dsp: u64,
    pub bram: u64,
    pub uram: u64,
}

impl PcAnchor {
    pub fn cost(&self) -> OperatorCost {
        OperatorCost {
            latency_ms: self.latency_ms,
            dsp: self.dsp,
            bram: self.bram,
            uram: self.uram,
        }
    }
}

impl RotAnchor {
    pub fn cost(&self) -> OperatorCost {
        OperatorCost {
            latency_ms: self.latency_ms,
            dsp: self.dsp,
            bram: self.bram,
            uram: self.uram,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scaling {
    /// Fraction of the Rot latency spent in NTT/INTT at the anchor.
    pub rot_ntt_latency_share: f64,
    /// Fraction of the Rot DSP slices inside the NTT/INTT units.
    pub rot_ntt_dsp_share: f64,
}

/// On-chip buffers outside the operator cores.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BufferInventory {
    /// Whether the Rot core's own BRAM/URAM figures are counted.
    #[serde(default = "yes")]
    pub rot_core: bool,
    /// Ciphertext staging buffers (`ct_b`, `ct_sum`, `ct_out`), one limb each.
    pub transfer_buffers: u64,
    pub double_buffered: bool,
    /// Capacity of one URAM block in bits.
    pub uram_bits: u64,
    /// Plaintext storage split evenly across the PCmul cores' buffers.
    pub matrix_buffer_bits: u64,
}

fn yes() -> bool {
    true
}

impl BufferInventory {
    pub fn empty() -> Self {
        Self {
            rot_core: false,
            transfer_buffers: 0,
            double_buffered: false,
            uram_bits: 288_000,
            matrix_buffer_bits: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostFixture {
    pub scaling: Scaling,
    pub ccadd: Vec<PcAnchor>,
    pub pcmul: Vec<PcAnchor>,
    pub rot: Vec<RotAnchor>,
    pub memory: BufferInventory,
}

fn log_distance(a: usize, b: usize) -> u32 {
    (a.trailing_zeros() as i64 - b.trailing_zeros() as i64).unsigned_abs() as u32
}

fn scale_up(value: u64, num: usize, den: usize) -> u64 {
    (value * num as u64).div_ceil(den as u64)
}

fn check_monotone(name: &str, anchors: &[PcAnchor]) -> Result<()> {
    let mut sorted = anchors.to_vec();
    sorted.sort_by_key(|a| a.pc);
    for w in sorted.windows(2) {
        if w[1].latency_ms > w[0].latency_ms {
            return Err(Error::Config(format!(
                "{name} latency rises from {} ms at PC={} to {} ms at PC={}",
                w[0].latency_ms, w[0].pc, w[1].latency_ms, w[1].pc
            )));
        }
    }
    Ok(())
}

impl CostFixture {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let f: Self = parse_toml_file(path.as_ref())?;
        f.validate()?;
        Ok(f)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let f: Self = parse_toml_str(text, Path::new("<inline>"))?;
        f.validate()?;
        Ok(f)
    }

    /// The calibrated fixture shipped as `fixtures/u55c_operators.cfg`.
    pub fn bundled() -> Self {
        Self::from_toml_str(include_str!("../../../../fixtures/u55c_operators.cfg")).expect("bundled fixture parses")
    }

    pub fn validate(&self) -> Result<()> {
        for (name, list) in [("ccadd", &self.ccadd), ("pcmul", &self.pcmul)] {
            if list.is_empty() {
                return Err(Error::Config(format!("fixture has no {name} entry")));
            }
            if list.iter().any(|a| !a.pc.is_power_of_two()) {
                return Err(Error::Config(format!("{name} PC values must be powers of two")));
            }
            check_monotone(name, list)?;
        }
        if self.rot.is_empty() {
            return Err(Error::Config("fixture has no rot entry".into()));
        }
        if self
            .rot
            .iter()
            .any(|a| !a.pc.is_power_of_two() || !a.pb.is_power_of_two())
        {
            return Err(Error::Config("rot PC/PB values must be powers of two".into()));
        }
        let all_costs = self
            .ccadd
            .iter()
            .chain(&self.pcmul)
            .map(PcAnchor::cost)
            .chain(self.rot.iter().map(RotAnchor::cost));
        for c in all_costs {
            if !(c.latency_ms.is_finite() && c.latency_ms >= 0.0) {
                return Err(Error::Config(format!("invalid latency {}", c.latency_ms)));
            }
        }
        for share in [self.scaling.rot_ntt_latency_share, self.scaling.rot_ntt_dsp_share] {
            if !(0.0..=1.0).contains(&share) {
                return Err(Error::Config(format!("scaling share {share} outside [0, 1]")));
            }
        }
        if self.memory.uram_bits == 0 {
            return Err(Error::Config("uram_bits must be positive".into()));
        }
        Ok(())
    }

    fn pc_cost(anchors: &[PcAnchor], pc: usize) -> OperatorCost {
        let a = anchors
            .iter()
            .min_by_key(|a| (log_distance(a.pc, pc), std::cmp::Reverse(a.pc)))
            .expect("validated non-empty");
        if a.pc == pc {
            return a.cost();
        }
        OperatorCost {
            latency_ms: a.latency_ms * a.pc as f64 / pc as f64,
            dsp: scale_up(a.dsp, pc, a.pc),
            bram: scale_up(a.bram, pc, a.pc),
            uram: scale_up(a.uram, pc, a.pc),
        }
    }

    pub fn ccadd(&self, pc: usize) -> OperatorCost {
        Self::pc_cost(&self.ccadd, pc)
    }

    pub fn pcmul(&self, pc: usize) -> OperatorCost {
        Self::pc_cost(&self.pcmul, pc)
    }

    pub fn rot(&self, pc: usize, pb: usize) -> OperatorCost {
        let a = self
            .rot
            .iter()
            .min_by_key(|a| {
                (
                    log_distance(a.pc, pc) + log_distance(a.pb, pb),
                    std::cmp::Reverse((a.pb, a.pc)),
                )
            })
            .expect("validated non-empty");
        if a.pc == pc && a.pb == pb {
            return a.cost();
        }
        let s = self.scaling;
        let pb_ratio = a.pb as f64 / pb as f64;
        let pc_ratio = a.pc as f64 / pc as f64;
        let latency_ms =
            a.latency_ms * (s.rot_ntt_latency_share * pb_ratio + (1.0 - s.rot_ntt_latency_share) * pc_ratio);
        let dsp = a.dsp as f64
            * (s.rot_ntt_dsp_share * pb as f64 / a.pb as f64
                + (1.0 - s.rot_ntt_dsp_share) * pc as f64 / a.pc as f64);
        OperatorCost {
            latency_ms,
            dsp: dsp.ceil() as u64,
            bram: scale_up(a.bram, pb, a.pb),
            uram: a.uram,
        }
    }
}
