use std::cmp::{Ordering, Reverse};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::budget::FpgaBudget;
use super::fixture::CostFixture;
use super::memory::memory_usage;
use super::model::{dsp_usage, iteration_latency_quiet, total_latency_quiet, OperatorLatencies};
use crate::bfv::HeParams;
use crate::error::{Error, Result};

/// One accelerator configuration. Printed as
/// `(pc_ccadd, pc_pcmul, pi, pc_rot, pb)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DesignPoint {
    /// Coefficients processed per cycle by each CCadd core.
    pub pc_ccadd: usize,
    /// Coefficients processed per cycle by each PCmul core.
    pub pc_pcmul: usize,
    /// Number of PCmul cores working in parallel.
    pub pi: usize,
    /// Coefficients processed per cycle by the Rot core outside its NTT.
    pub pc_rot: usize,
    /// Butterfly units in the Rot core's NTT/INTT.
    pub pb: usize,
}

impl fmt::Display for DesignPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{},{})",
            self.pc_ccadd, self.pc_pcmul, self.pi, self.pc_rot, self.pb
        )
    }
}

/// Grid of candidate values for every parallelism parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DesignSpace {
    pub pc: Vec<usize>,
    pub pb: Vec<usize>,
    pub pi: Vec<usize>,
    /// Lifts the cap of 16 coefficients per cycle. Wider cores need a larger
    /// `ct_b` buffer port than the URAM layout provides efficiently.
    pub allow_wide_pc: bool,
}

/// Largest PC value allowed without `allow_wide_pc`.
pub const MAX_PC: usize = 16;

impl Default for DesignSpace {
    fn default() -> Self {
        Self {
            pc: vec![1, 2, 4, 8, 16],
            pb: vec![8, 16, 32, 64],
            pi: vec![1, 2, 4, 8, 16],
            allow_wide_pc: false,
        }
    }
}

impl DesignSpace {
    pub fn validate(&self) -> Result<()> {
        for (name, grid) in [("pc", &self.pc), ("pb", &self.pb), ("pi", &self.pi)] {
            if grid.is_empty() {
                return Err(Error::Config(format!("{name} grid is empty")));
            }
            if let Some(v) = grid.iter().find(|v| !v.is_power_of_two()) {
                return Err(Error::Config(format!("{name} value {v} is not a power of two")));
            }
        }
        if !self.allow_wide_pc {
            if let Some(v) = self.pc.iter().find(|&&v| v > MAX_PC) {
                return Err(Error::Config(format!(
                    "pc value {v} exceeds {MAX_PC}; enable wide PC to explore it"
                )));
            }
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<DesignPoint> {
        let mut out = Vec::with_capacity(self.len());
        for &pc_ccadd in &self.pc {
            for &pc_pcmul in &self.pc {
                for &pi in &self.pi {
                    for &pc_rot in &self.pc {
                        for &pb in &self.pb {
                            out.push(DesignPoint {
                                pc_ccadd,
                                pc_pcmul,
                                pi,
                                pc_rot,
                                pb,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.pc.len().pow(3) * self.pb.len() * self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostResult {
    pub il_ms: f64,
    pub tl_ms: f64,
    pub dsp: u64,
    pub bram: u64,
    pub uram: u64,
    pub feasible: bool,
}

impl CostResult {
    /// Secondary ranking key: DSPs, plus BRAM at half weight (a 36 Kb BRAM
    /// is an eighth of a URAM but twice as plentiful per DSP), plus URAM.
    pub fn resource_score(&self) -> u64 {
        self.dsp + self.bram.div_ceil(2) + self.uram
    }
}

/// Everything the cost model needs besides the design point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Workload {
    pub giant: usize,
    pub baby: usize,
    pub n: usize,
    pub limb_bits: u32,
}

impl Workload {
    pub fn from_params(params: &HeParams) -> Result<Self> {
        let shape = params
            .matmul
            .ok_or_else(|| Error::Config("parameter file has no [matmul] shape".into()))?;
        Ok(Self {
            giant: shape.giant,
            baby: shape.baby,
            n: params.n,
            limb_bits: params.q_limbs.bits,
        })
    }
}

pub fn evaluate(
    point: &DesignPoint,
    work: &Workload,
    fixture: &CostFixture,
    budget: &FpgaBudget,
) -> Result<CostResult> {
    let ccadd = fixture.ccadd(point.pc_ccadd);
    let pcmul = fixture.pcmul(point.pc_pcmul);
    let rot = fixture.rot(point.pc_rot, point.pb);
    let lat = OperatorLatencies {
        ccadd_ms: ccadd.latency_ms,
        pcmul_ms: pcmul.latency_ms,
        rot_ms: rot.latency_ms,
    };
    let il_ms = iteration_latency_quiet(&lat, work.baby, point.pi)?;
    let tl_ms = total_latency_quiet(&lat, work.giant, work.baby, point.pi)?;
    let cores = point.pi as u64;
    let dsp = dsp_usage(cores, ccadd.dsp, pcmul.dsp, rot.dsp);
    let (mem_bram, mem_uram) = memory_usage(&fixture.memory, &rot, point.pi, work.n, work.limb_bits)?;
    let bram = mem_bram + (cores + 1) * ccadd.bram + cores * pcmul.bram;
    let uram = mem_uram + (cores + 1) * ccadd.uram + cores * pcmul.uram;
    Ok(CostResult {
        il_ms,
        tl_ms,
        dsp,
        bram,
        uram,
        feasible: budget.admits(dsp, bram, uram),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankedPoint {
    pub rank: usize,
    pub point: DesignPoint,
    pub cost: CostResult,
}

/// Latency first, then resource score, then the wider PCmul core, then the
/// point itself so that the order is total.
pub fn rank_order(a: &(DesignPoint, CostResult), b: &(DesignPoint, CostResult)) -> Ordering {
    a.1.tl_ms
        .total_cmp(&b.1.tl_ms)
        .then_with(|| a.1.resource_score().cmp(&b.1.resource_score()))
        .then_with(|| Reverse(a.0.pc_pcmul).cmp(&Reverse(b.0.pc_pcmul)))
        .then_with(|| a.0.cmp(&b.0))
}

/// Cost of every grid point, feasible or not, in grid order.
pub fn evaluate_all(
    space: &DesignSpace,
    work: &Workload,
    fixture: &CostFixture,
    budget: &FpgaBudget,
) -> Result<Vec<(DesignPoint, CostResult)>> {
    space.validate()?;
    if let Some(&most) = space.pi.iter().max().filter(|&&pi| pi > work.baby) {
        log::warn!(
            "PI values up to {most} exceed the {} baby steps; those configurations leave cores idle",
            work.baby
        );
    }
    space
        .points()
        .into_par_iter()
        .map(|p| evaluate(&p, work, fixture, budget).map(|c| (p, c)))
        .collect()
}

/// Feasible grid points in ranked order.
pub fn explore(
    space: &DesignSpace,
    work: &Workload,
    fixture: &CostFixture,
    budget: &FpgaBudget,
) -> Result<Vec<RankedPoint>> {
    let all = evaluate_all(space, work, fixture, budget)?;
    let evaluated = all.len();
    let mut feasible: Vec<_> = all.into_iter().filter(|(_, c)| c.feasible).collect();
    if feasible.is_empty() {
        return Err(Error::BudgetTooSmall { evaluated });
    }
    feasible.sort_by(rank_order);
    Ok(feasible
        .into_iter()
        .enumerate()
        .map(|(i, (point, cost))| RankedPoint {
            rank: i + 1,
            point,
            cost,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full_workload() -> Workload {
        Workload::from_params(&HeParams::sophomr()).unwrap()
    }

    #[test]
    fn grid_size() {
        let s = DesignSpace::default();
        assert_eq!(s.points().len(), 2500);
        assert_eq!(s.len(), 2500);
    }

    #[test]
    fn wide_pc_needs_override() {
        let mut s = DesignSpace {
            pc: vec![32],
            ..Default::default()
        };
        assert!(s.validate().is_err());
        s.allow_wide_pc = true;
        assert!(s.validate().is_ok());
        s.pb = vec![24];
        assert!(s.validate().is_err());
    }

    #[test]
    fn best_configuration_totals() {
        let p = DesignPoint {
            pc_ccadd: 16,
            pc_pcmul: 16,
            pi: 2,
            pc_rot: 16,
            pb: 64,
        };
        let c = evaluate(&p, &full_workload(), &CostFixture::bundled(), &FpgaBudget::u55c()).unwrap();
        assert!((c.il_ms - 32.15).abs() < 1e-9);
        assert!((c.tl_ms - 2150.2).abs() < 1e-9);
        assert_eq!((c.dsp, c.bram, c.uram), (6920, 1536, 659));
        assert!(c.feasible);
        assert_eq!(p.to_string(), "(16,16,2,16,64)");
    }

    #[test]
    fn dsp_budget_of_one_is_infeasible() {
        let budget = FpgaBudget {
            dsp: 1,
            ..FpgaBudget::u55c()
        };
        let err = explore(&DesignSpace::default(), &full_workload(), &CostFixture::bundled(), &budget)
            .unwrap_err();
        assert!(matches!(err, Error::BudgetTooSmall { evaluated: 2500 }));
    }
}
