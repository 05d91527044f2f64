//! Analytic latency and resource models of the MatMul accelerator, and an
//! exhaustive search over its parallelism parameters.
//!
//! Operator figures come from a [`CostFixture`]; [`explore`] evaluates every
//! point of a [`DesignSpace`] against an [`FpgaBudget`] and ranks the
//! feasible ones by total latency, then by resource use.

mod budget;
mod explore;
mod fixture;
mod memory;
mod model;
mod report;

pub use budget::FpgaBudget;
pub use explore::{
    evaluate, evaluate_all, explore, rank_order, CostResult, DesignPoint, DesignSpace, RankedPoint, Workload,
    MAX_PC,
};
pub use fixture::{BufferInventory, CostFixture, OperatorCost, PcAnchor, RotAnchor, Scaling};
pub use memory::{memory_usage, transfer_buffer_blocks};
pub use model::{dsp_usage, iteration_latency, rotation_bound, total_latency, OperatorLatencies};
pub use report::DseReport;
