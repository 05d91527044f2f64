use std::fmt::Write as _;

use serde::Serialize;

use super::budget::FpgaBudget;
use super::explore::{DesignSpace, RankedPoint, Workload};

/// Outcome of a design-space exploration, ready for printing or
/// serialization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DseReport {
    pub workload: Workload,
    pub budget: FpgaBudget,
    pub space: DesignSpace,
    pub evaluated: usize,
    pub feasible: usize,
    pub ranking: Vec<RankedPoint>,
}

impl DseReport {
    pub fn new(
        workload: Workload,
        budget: FpgaBudget,
        space: DesignSpace,
        ranking: Vec<RankedPoint>,
    ) -> Self {
        Self {
            workload,
            budget,
            evaluated: space.len(),
            space,
            feasible: ranking.len(),
            ranking,
        }
    }

    /// Keeps only the first `limit` entries of the ranking.
    pub fn truncate(&mut self, limit: usize) {
        self.ranking.truncate(limit);
    }

    /// Fixed-width table with one row per ranked configuration.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:>4}  {:>8} {:>8} {:>3} {:>6} {:>3}  {:>10} {:>10}  {:>6} {:>5} {:>5}  {:>8}",
            "rank", "pc_ccadd", "pc_pcmul", "pi", "pc_rot", "pb", "IL (ms)", "TL (ms)", "DSP", "BRAM", "URAM", "feasible"
        );
        for r in &self.ranking {
            let p = &r.point;
            let c = &r.cost;
            let _ = writeln!(
                s,
                "{:>4}  {:>8} {:>8} {:>3} {:>6} {:>3}  {:>10.2} {:>10.2}  {:>6} {:>5} {:>5}  {:>8}",
                r.rank,
                p.pc_ccadd,
                p.pc_pcmul,
                p.pi,
                p.pc_rot,
                p.pb,
                c.il_ms,
                c.tl_ms,
                c.dsp,
                c.bram,
                c.uram,
                if c.feasible { "yes" } else { "no" }
            );
        }
        let _ = writeln!(
            s,
            "{} of {} configurations fit the budget (DSP {}, BRAM {}, URAM {})",
            self.feasible, self.evaluated, self.budget.dsp, self.budget.bram, self.budget.uram
        );
        s
    }
}
