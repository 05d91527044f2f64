//! Homomorphic matrix-vector multiplication by diagonals, evaluated either
//! with one single-step rotation per diagonal or in baby-step/giant-step form.

mod bsgs;
mod diagonal;
mod matrix;
mod stats;

pub use bsgs::{decrypt_output, encrypt_input, matmul_bsgs, matmul_naive, BsgsOptions, MatMulKeys};
pub use diagonal::{build_diagonal_set, extract_diagonal, pack_vector, DiagonalSet, GiantStepOrder, MatMulPlan};
pub use matrix::Matrix;
pub use stats::{MatMulStats, TimeBreakdown};
