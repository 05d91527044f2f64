use std::path::Path;

use anyhow::{bail, Context, Result};
use omr_core::bfv::HeParams;

/// Ring dimensions above this need `--full`.
pub const DESK_MAX_N: usize = 8192;

pub fn load(spec: &str, full: bool) -> Result<HeParams> {
    let params = match spec {
        "desk" if !Path::new(spec).exists() => HeParams::desk(),
        "sophomr" if !Path::new(spec).exists() => HeParams::sophomr(),
        path => HeParams::from_file(path).with_context(|| format!("loading parameters from {path}"))?,
    };
    if params.n > DESK_MAX_N && !full {
        bail!(omr_core::Error::Usage(format!(
            "n = {} is above the desk limit of {DESK_MAX_N}; pass --full to run it",
            params.n
        )));
    }
    Ok(params)
}
