use std::path::Path;

use anyhow::{bail, Context, Result};
use omr_core::bfv::{Evaluator, HeContext, HeParams};
use omr_core::matmul::{
    build_diagonal_set, decrypt_output, encrypt_input, matmul_bsgs, matmul_naive, BsgsOptions, GiantStepOrder,
    MatMulKeys, MatMulStats, Matrix, TimeBreakdown,
};
use omr_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::{Cli, MatmulArgs};
use crate::exit::{self, CheckFailed};
use crate::keygen::KeySet;
use crate::params;

#[derive(Debug, Serialize)]
pub struct ParamsSummary {
    pub n: usize,
    pub t: u64,
    pub q_limbs: usize,
    pub p_limbs: usize,
    pub limb_bits: u32,
    pub dnum: usize,
    pub log_q: u32,
    pub log_pq: u32,
}

impl ParamsSummary {
    pub fn new(p: &HeParams) -> Self {
        Self {
            n: p.n,
            t: p.t,
            q_limbs: p.q_limbs.count,
            p_limbs: p.p_limbs.count,
            limb_bits: p.q_limbs.bits,
            dnum: p.dnum,
            log_q: p.log_q(),
            log_pq: p.log_pq(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub stats: MatMulStats,
    pub breakdown: TimeBreakdown,
    pub rot_ms_per_op: Option<f64>,
    pub pcmul_ms_per_op: Option<f64>,
    pub noise_budget_bits: f64,
    pub correct: bool,
}

impl RunReport {
    fn new(stats: MatMulStats, noise_budget_bits: f64, correct: bool) -> Self {
        let (rot, pcmul) = stats.per_op_ms();
        Self {
            breakdown: stats.breakdown(),
            rot_ms_per_op: rot,
            pcmul_ms_per_op: pcmul,
            stats,
            noise_budget_bits,
            correct,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct MatmulReport {
    pub params: ParamsSummary,
    pub seed: u64,
    pub rows: usize,
    pub cols: usize,
    pub giant: usize,
    pub baby: usize,
    pub cores: usize,
    pub expected_rot_count: usize,
    pub naive_rot_count: usize,
    pub runs: Vec<RunReport>,
    pub naive: Option<RunReport>,
    pub total: RunReport,
    pub result: Vec<u64>,
    pub expected: Vec<u64>,
    pub correct: bool,
}

/// Split used when neither the flags nor the parameter file give one that
/// covers `cols`: the smallest square-ish `giant × baby ≥ cols`.
pub fn default_split(cols: usize) -> (usize, usize) {
    let mut baby = 1;
    while baby * baby < cols {
        baby += 1;
    }
    (cols.div_ceil(baby), baby)
}

fn load_vector(path: &Path, t: u64) -> Result<Vec<u64>> {
    let m = Matrix::load(path).with_context(|| format!("reading vector {}", path.display()))?;
    if m.rows() != 1 {
        bail!(Error::Usage(format!(
            "{} holds a {}x{} matrix, expected a single row",
            path.display(),
            m.rows(),
            m.cols()
        )));
    }
    if m.modulus() != t {
        bail!(Error::Usage(format!("vector is over Z_{}, parameters use t = {t}", m.modulus())));
    }
    Ok(m.data().to_vec())
}

pub fn run(args: &MatmulArgs, cli: &Cli) -> Result<u8> {
    let params = params::load(&args.params.params, cli.full)?;
    let seed = args.seed.unwrap_or(params.seed);
    if args.repeat == 0 {
        bail!(Error::Usage("--repeat must be at least 1".into()));
    }
    if args.cores == 0 {
        bail!(Error::Usage("--cores must be at least 1".into()));
    }
    let t = params.t;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let matrix = match &args.matrix {
        Some(path) => Matrix::load(path).with_context(|| format!("reading matrix {}", path.display()))?,
        None => {
            let cols = args.cols.or(params.matmul.map(|m| m.k)).unwrap_or(4);
            Matrix::random(args.rows, cols, t, &mut rng)?
        }
    };
    let vector = match &args.vector {
        Some(path) => load_vector(path, t)?,
        None => Matrix::random(1, matrix.cols(), t, &mut rng)?.data().to_vec(),
    };
    let (giant, baby) = match (args.giant, args.baby, params.matmul) {
        (Some(g), Some(b), _) => (g, b),
        (None, None, Some(m)) if m.giant * m.baby >= matrix.cols() => (m.giant, m.baby),
        (None, None, _) => default_split(matrix.cols()),
        _ => bail!(Error::Usage("--giant and --baby must be given together".into())),
    };

    let summary = ParamsSummary::new(&params);
    let ctx = HeContext::new(params)?;
    let set = build_diagonal_set(&matrix, giant, baby, ctx.slot_count(), GiantStepOrder::Descending)?;
    let plan = *set.plan();

    // Shift 1 drives the baby steps (and the single-step reference), shift
    // `baby` the giant-step merges. With one baby step both are shift 1.
    let mut shifts = vec![1];
    if giant > 1 && baby > 1 {
        shifts.push(baby);
    }
    let keys = match &args.key {
        Some(dir) => KeySet::load(dir, &ctx, &shifts)?,
        None => KeySet::generate(&ctx, seed, &shifts)?,
    };
    let one = keys.rotation(1)?;
    let by_baby = keys.rotation(*shifts.last().expect("non-empty"))?;
    let mat_keys = MatMulKeys { one, baby: by_baby };
    let opts = BsgsOptions {
        parallel_cores: args.cores,
    };
    let expected = matrix.mul_vector(&vector)?;

    let ev = Evaluator::new(&ctx);
    if !args.no_timing {
        let ct = encrypt_input(&vector, &plan, &keys.secret, &ctx, seed)?;
        matmul_bsgs(&ev, &set, &ct, mat_keys, &opts)?;
    }
    let mut runs = Vec::with_capacity(args.repeat);
    let mut total = MatMulStats::default();
    let mut result = Vec::new();
    for i in 0..args.repeat {
        let ct = encrypt_input(&vector, &plan, &keys.secret, &ctx, seed.wrapping_add(1 + i as u64))?;
        let (out, mut stats) = matmul_bsgs(&ev, &set, &ct, mat_keys, &opts)?;
        let (values, budget) = decrypt_output(&out, matrix.rows(), &keys.secret, &ctx)?;
        if args.no_timing {
            stats.clear_timings();
        }
        total.accumulate(&stats);
        let correct = values == expected;
        result = values;
        runs.push(RunReport::new(stats, budget, correct));
    }
    let naive = if args.naive {
        let ct = encrypt_input(&vector, &plan, &keys.secret, &ctx, seed)?;
        let (out, mut stats) = matmul_naive(&ev, &set, &ct, one)?;
        let (values, budget) = decrypt_output(&out, matrix.rows(), &keys.secret, &ctx)?;
        if args.no_timing {
            stats.clear_timings();
        }
        Some(RunReport::new(stats, budget, values == expected))
    } else {
        None
    };

    let min_budget = runs.iter().map(|r| r.noise_budget_bits).fold(f64::INFINITY, f64::min);
    let correct = runs.iter().all(|r| r.correct) && !naive.as_ref().is_some_and(|r| !r.correct);
    let report = MatmulReport {
        params: summary,
        seed,
        rows: matrix.rows(),
        cols: matrix.cols(),
        giant,
        baby,
        cores: args.cores,
        expected_rot_count: plan.bsgs_rotations(),
        naive_rot_count: plan.naive_rotations(),
        runs,
        naive,
        total: RunReport::new(total, min_budget, correct),
        result,
        expected,
        correct,
    };

    let json = serde_json::to_string_pretty(&report)?;
    if let Some(path) = &args.out {
        std::fs::write(path, format!("{json}\n")).with_context(|| format!("writing {}", path.display()))?;
    }
    if args.json {
        println!("{json}");
    } else {
        print!("{}", render(&report));
    }
    if !report.correct {
        bail!(CheckFailed("decrypted product differs from the plaintext product".into()));
    }
    Ok(exit::SUCCESS)
}

fn render(r: &MatmulReport) -> String {
    use std::fmt::Write as _;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "params: n = {}, t = {}, {}+{} limbs of {} bits (log Q = {}, log PQ = {}), dnum = {}",
        r.params.n,
        r.params.t,
        r.params.q_limbs,
        r.params.p_limbs,
        r.params.limb_bits,
        r.params.log_q,
        r.params.log_pq,
        r.params.dnum
    );
    let _ = writeln!(
        s,
        "matrix: {}x{}, split {}x{}, {} core(s), seed {}",
        r.rows, r.cols, r.giant, r.baby, r.cores, r.seed
    );
    let _ = writeln!(
        s,
        "{:>6}  {:>5} {:>6} {:>6}  {:>10} {:>7} {:>7} {:>7} {:>7}  {:>7}",
        "run", "rot", "pcmul", "ccadd", "total ms", "pcmul%", "rot%", "ccadd%", "other%", "budget"
    );
    let mut row = |name: &str, run: &RunReport| {
        let b = &run.breakdown;
        let _ = writeln!(
            s,
            "{:>6}  {:>5} {:>6} {:>6}  {:>10.2} {:>7.1} {:>7.1} {:>7.1} {:>7.1}  {:>7.1}",
            name,
            run.stats.rot_count,
            run.stats.pcmul_count,
            run.stats.ccadd_count,
            run.stats.total_ms,
            b.pcmul_pct,
            b.rot_pct,
            b.ccadd_pct,
            b.other_pct,
            run.noise_budget_bits
        );
    };
    for (i, run) in r.runs.iter().enumerate() {
        row(&format!("#{}", i + 1), run);
    }
    if let Some(n) = &r.naive {
        row("naive", n);
    }
    if r.runs.len() > 1 {
        row("total", &r.total);
    }
    if let (Some(rot), Some(pcmul)) = (r.total.rot_ms_per_op, r.total.pcmul_ms_per_op) {
        let _ = writeln!(s, "per call: rot {rot:.3} ms, pcmul {pcmul:.3} ms");
    }
    let _ = writeln!(
        s,
        "rotations: {} (expected {}, single-step form {})",
        r.runs[0].stats.rot_count, r.expected_rot_count, r.naive_rot_count
    );
    let shown: Vec<String> = r.result.iter().take(8).map(u64::to_string).collect();
    let more = if r.result.len() > 8 { " ..." } else { "" };
    let _ = writeln!(
        s,
        "result: [{}{more}] {}",
        shown.join(", "),
        if r.correct { "matches M·v mod t" } else { "MISMATCH" }
    );
    s
}
