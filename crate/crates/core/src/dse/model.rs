use serde::Serialize;

use crate::error::{Error, Result};

/// Latency of one operator instance at a given parallelism, in milliseconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorLatencies {
    pub ccadd_ms: f64,
    pub pcmul_ms: f64,
    pub rot_ms: f64,
}

fn check_shape(baby: usize, cores: usize) -> Result<()> {
    if cores == 0 {
        return Err(Error::Usage("at least one PCmul core is required".into()));
    }
    if baby == 0 {
        return Err(Error::Usage("baby-step count must be positive".into()));
    }
    Ok(())
}

fn warn_idle(baby: usize, cores: usize) {
    if cores > baby {
        log::warn!("{cores} PCmul cores for {baby} baby steps leaves cores idle");
    }
}

/// [`iteration_latency`] without the idle-core warning, for grid sweeps
/// that report it once.
pub(crate) fn iteration_latency_quiet(lat: &OperatorLatencies, baby: usize, cores: usize) -> Result<f64> {
    check_shape(baby, cores)?;
    let products = baby as f64 / cores as f64 * lat.pcmul_ms + lat.ccadd_ms;
    Ok(products.max(lat.rot_ms) + lat.ccadd_ms)
}

/// Latency of one giant step: the `baby` products spread over `cores`
/// PCmul cores and accumulated, overlapped with the giant-step rotation,
/// followed by the final addition.
///
/// `max{(baby/cores)·L_M + L_A, L_R} + L_A`
/// Idle cores (`cores > baby`) are legal and logged as a warning.
pub fn iteration_latency(lat: &OperatorLatencies, baby: usize, cores: usize) -> Result<f64> {
    warn_idle(baby, cores);
    iteration_latency_quiet(lat, baby, cores)
}

/// Latency of a whole MatMul: the `baby − 1` baby-step rotations followed by
/// `giant` iterations.
///
/// `(baby − 1)·L_R + giant·IL`
pub fn total_latency(lat: &OperatorLatencies, giant: usize, baby: usize, cores: usize) -> Result<f64> {
    warn_idle(baby, cores);
    total_latency_quiet(lat, giant, baby, cores)
}

pub(crate) fn total_latency_quiet(lat: &OperatorLatencies, giant: usize, baby: usize, cores: usize) -> Result<f64> {
    let il = iteration_latency_quiet(lat, baby, cores)?;
    Ok((baby as f64 - 1.0) * lat.rot_ms + giant as f64 * il)
}

/// DSP slices of the accelerator: `cores + 1` CCadd units (the `cores − 1`
/// reduction adders plus accumulation and output), `cores` PCmul units and a
/// single shared Rot unit.
pub fn dsp_usage(cores: u64, d_ccadd: u64, d_pcmul: u64, d_rot: u64) -> u64 {
    (cores + 1) * d_ccadd + cores * d_pcmul + d_rot
}

/// `true` when the rotation hides the whole product chain of a giant step,
/// so that more PCmul cores cannot shorten the MatMul.
pub fn rotation_bound(lat: &OperatorLatencies, baby: usize, cores: usize) -> bool {
    lat.rot_ms >= baby as f64 / cores as f64 * lat.pcmul_ms + lat.ccadd_ms
}
