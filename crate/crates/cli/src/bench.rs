use std::time::Instant;

use anyhow::{bail, Context, Result};
use omr_core::bfv::{encode, encrypt, Evaluator, HeContext, PreparedPlaintext};
use omr_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::{BenchArgs, Cli};
use crate::exit;
use crate::keygen::KeySet;
use crate::matmul::ParamsSummary;
use crate::params;

#[derive(Debug, Serialize)]
struct OpTiming {
    op: &'static str,
    mean_ms: f64,
    min_ms: f64,
}

#[derive(Debug, Serialize)]
struct BenchReport {
    params: ParamsSummary,
    iterations: usize,
    ops: Vec<OpTiming>,
}

/// One warm-up call, then `reps` timed calls.
fn time(op: &'static str, reps: usize, mut f: impl FnMut() -> Result<()>) -> Result<OpTiming> {
    f()?;
    let mut samples = Vec::with_capacity(reps);
    for _ in 0..reps {
        let t = Instant::now();
        f()?;
        samples.push(t.elapsed().as_secs_f64() * 1e3);
    }
    Ok(OpTiming {
        op,
        mean_ms: samples.iter().sum::<f64>() / reps as f64,
        min_ms: samples.iter().copied().fold(f64::INFINITY, f64::min),
    })
}

pub fn run(args: &BenchArgs, cli: &Cli) -> Result<u8> {
    if args.repeat == 0 {
        bail!(Error::Usage("--repeat must be at least 1".into()));
    }
    let params = params::load(&args.params.params, cli.full)?;
    let seed = args.seed.unwrap_or(params.seed);
    let summary = ParamsSummary::new(&params);
    let ctx = HeContext::new(params)?;
    let keys = KeySet::generate(&ctx, seed, &[1])?;
    let ev = Evaluator::new(&ctx);
    let t = ctx.t().value();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<u64> = (0..ctx.slot_count()).map(|_| rng.gen_range(0..t)).collect();
    let pt = encode(&values, &ctx)?;
    let ct = encrypt(&pt, &keys.secret, &ctx, seed)?;
    let key = keys.rotation(1)?;
    let tables = &ctx.q_tables()[0];
    let mut limb: Vec<u64> = (0..ctx.n()).map(|_| rng.gen_range(0..tables.modulus().value())).collect();

    let reps = args.repeat;
    let ops = vec![
        time("ntt (one limb)", reps, || {
            tables.forward(&mut limb);
            tables.inverse(&mut limb);
            Ok(())
        })?,
        time("encode", reps, || encode(&values, &ctx).map(drop).map_err(Into::into))?,
        time("ccadd", reps, || ev.cc_add(&ct, &ct).map(drop).map_err(Into::into))?,
        time("pcmul", reps, || {
            let prepared = PreparedPlaintext::new(&pt, &ctx)?;
            ev.pc_mul_prepared(&prepared, &ct)?;
            Ok(())
        })?,
        time("rot", reps, || ev.rotate(&ct, 1, Some(key)).map(drop).map_err(Into::into))?,
    ];
    let report = BenchReport {
        params: summary,
        iterations: reps,
        ops,
    };
    let json = serde_json::to_string_pretty(&report)?;
    if let Some(path) = &args.out {
        std::fs::write(path, format!("{json}\n")).with_context(|| format!("writing {}", path.display()))?;
    }
    if args.json {
        println!("{json}");
    } else {
        println!("n = {}, {} Q limbs, {} iterations", report.params.n, report.params.q_limbs, reps);
        println!("{:<16} {:>10} {:>10}", "op", "mean ms", "min ms");
        for op in &report.ops {
            println!("{:<16} {:>10.3} {:>10.3}", op.op, op.mean_ms, op.min_ms);
        }
    }
    Ok(exit::SUCCESS)
}
