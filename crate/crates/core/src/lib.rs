//! Homomorphic baby-step/giant-step matrix-vector multiplication over RNS-BFV,
//! together with the analytic latency/resource models of a MatMul accelerator
//! and a design-space-exploration engine over its parallelism parameters.

pub mod bfv;
mod config;
pub mod dse;
pub mod error;
pub mod matmul;
pub mod modring;
pub mod oracle;

pub use error::{Error, Result};
