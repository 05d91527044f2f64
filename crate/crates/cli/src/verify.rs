use std::collections::BTreeSet;
use std::time::Instant;

use anyhow::{bail, Result};
use omr_core::bfv::{decode, Ciphertext, decrypt, encode, encrypt, Evaluator, HeContext, HeParams};
use omr_core::dse::{dsp_usage, explore, iteration_latency, total_latency, CostFixture, DesignPoint, DesignSpace, FpgaBudget, OperatorLatencies, Workload};
use omr_core::matmul::{build_diagonal_set, decrypt_output, encrypt_input, matmul_bsgs, matmul_naive, BsgsOptions, GiantStepOrder, MatMulKeys, Matrix};
use omr_core::modring::{ntt_primes, Modulus, NttTables};
use omr_core::oracle::{matvec_mod, negacyclic_dft, rotate_left};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::args::{Cli, Suite, VerifyArgs};
use crate::exit::{self, CheckFailed};
use crate::keygen::KeySet;
use crate::params;

struct Check {
    name: String,
    passed: bool,
    detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

pub fn run(args: &VerifyArgs, cli: &Cli) -> Result<u8> {
    let suites: Vec<Suite> = match args.suite {
        Suite::All => vec![Suite::Ntt, Suite::Homomorphism, Suite::Bsgs, Suite::Costmodel, Suite::Dse],
        one => vec![one],
    };
    let needs_he = suites.iter().any(|s| matches!(s, Suite::Homomorphism | Suite::Bsgs));
    let params = if needs_he {
        Some(params::load(&args.params.params, cli.full)?)
    } else {
        None
    };
    let mut failures = 0;
    println!("{:<14} {:<40} {:<6} detail", "suite", "check", "result");
    for suite in suites {
        let began = Instant::now();
        let checks = match suite {
            Suite::Ntt => ntt_suite(args.seed)?,
            Suite::Homomorphism => homomorphism_suite(params.clone().expect("loaded"), args.seed)?,
            Suite::Bsgs => bsgs_suite(params.clone().expect("loaded"), args.seed)?,
            Suite::Costmodel => costmodel_suite()?,
            Suite::Dse => dse_suite()?,
            Suite::All => unreachable!("expanded above"),
        };
        let name = format!("{suite:?}").to_lowercase();
        for c in &checks {
            println!(
                "{:<14} {:<40} {:<6} {}",
                name,
                c.name,
                if c.passed { "PASS" } else { "FAIL" },
                c.detail
            );
        }
        failures += checks.iter().filter(|c| !c.passed).count();
        log::info!("{name} suite took {:.2} s", began.elapsed().as_secs_f64());
    }
    if failures > 0 {
        bail!(CheckFailed(format!("{failures} check(s) failed")));
    }
    Ok(exit::SUCCESS)
}

fn ntt_suite(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    for n in [8usize, 16, 1024] {
        let q = ntt_primes(60, 1, n, &[])?[0];
        let tables = NttTables::new(n, Modulus::new(q)?)?;
        let mut bad = 0;
        for _ in 0..100 {
            let v: Vec<u64> = (0..n).map(|_| rng.gen_range(0..q)).collect();
            let mut fast = v.clone();
            tables.forward(&mut fast);
            if fast != negacyclic_dft(&v, tables.psi(), q) {
                bad += 1;
            }
        }
        checks.push(Check::new(format!("forward = naive DFT, n={n}"), bad == 0, format!("{bad}/100 mismatches")));
    }
    let mut failed_sizes = Vec::new();
    for log_n in 1..=16 {
        let n = 1usize << log_n;
        let q = ntt_primes(60, 1, n, &[])?[0];
        let tables = NttTables::new(n, Modulus::new(q)?)?;
        let v: Vec<u64> = (0..n).map(|_| rng.gen_range(0..q)).collect();
        let mut w = v.clone();
        tables.forward(&mut w);
        tables.inverse(&mut w);
        if w != v {
            failed_sizes.push(n);
        }
    }
    checks.push(Check::new(
        "inverse(forward(v)) = v, n=2..65536",
        failed_sizes.is_empty(),
        format!("failing sizes: {failed_sizes:?}"),
    ));
    Ok(checks)
}

fn homomorphism_suite(params: HeParams, seed: u64) -> Result<Vec<Check>> {
    let ctx = HeContext::new(params)?;
    let keys = KeySet::generate(&ctx, seed, &[1, 3])?;
    let sk = &keys.secret;
    let ev = Evaluator::new(&ctx);
    let t = ctx.t().value();
    let u = ctx.slot_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut random = || (0..u).map(|_| rng.gen_range(0..t)).collect::<Vec<u64>>();
    let (a, b) = (random(), random());
    let ca = encrypt(&encode(&a, &ctx)?, sk, &ctx, seed + 10)?;
    let cb = encrypt(&encode(&b, &ctx)?, sk, &ctx, seed + 11)?;
    let open = |ct: &Ciphertext| -> Result<(Vec<u64>, f64)> {
        let d = decrypt(ct, sk, &ctx)?;
        Ok((decode(&d.plaintext, &ctx)?, d.noise_budget_bits))
    };

    let mut checks = Vec::new();
    let (fresh, budget) = open(&ca)?;
    checks.push(Check::new("decrypt(encrypt(v)) = v", fresh == a, format!("budget {budget:.1} bits")));

    let sum = ev.cc_add(&ca, &cb)?;
    let want: Vec<u64> = a.iter().zip(&b).map(|(x, y)| (x + y) % t).collect();
    checks.push(Check::new("CCadd = slotwise sum", open(&sum)?.0 == want, ""));

    let prod = ev.pc_mul(&encode(&b, &ctx)?, &ca)?;
    let want: Vec<u64> = a.iter().zip(&b).map(|(&x, &y)| ((x as u128 * y as u128) % t as u128) as u64).collect();
    let (got, after) = open(&prod)?;
    checks.push(Check::new(
        "PCmul = slotwise product",
        got == want,
        format!("budget {budget:.1} -> {after:.1} bits"),
    ));

    for shift in [1usize, 3] {
        let rot = ev.rotate(&ca, shift, Some(keys.rotation(shift)?))?;
        let (got, _) = open(&rot)?;
        checks.push(Check::new(
            format!("Rot by {shift} = slot rotation"),
            got == rotate_left(&a, shift),
            "",
        ));
    }
    Ok(checks)
}

fn bsgs_suite(params: HeParams, seed: u64) -> Result<Vec<Check>> {
    let ctx = HeContext::new(params)?;
    let t = ctx.t().value();
    let max_baby = 16;
    let shifts: Vec<usize> = (1..=max_baby).collect();
    let keys = KeySet::generate(&ctx, seed, &shifts)?;
    let ev = Evaluator::new(&ctx);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb565);

    let (mut wrong, mut law, mut economy, mut covered) = (0, 0, 0, 0);
    let instances = 20;
    for i in 0..instances {
        let rows = rng.gen_range(1..=64);
        let cols = rng.gen_range(1..=16);
        let baby = rng.gen_range(1..=cols.min(max_baby));
        let mut giant = cols.div_ceil(baby);
        if i % 2 == 0 {
            giant += 1;
        }
        if giant * baby > cols {
            covered += 1;
        }
        let m = Matrix::random(rows, cols, t, &mut rng)?;
        let v: Vec<u64> = (0..cols).map(|_| rng.gen_range(0..t)).collect();
        let set = build_diagonal_set(&m, giant, baby, ctx.slot_count(), GiantStepOrder::Descending)?;
        let ct = encrypt_input(&v, set.plan(), &keys.secret, &ctx, seed + i)?;
        let mk = MatMulKeys {
            one: keys.rotation(1)?,
            baby: keys.rotation(baby)?,
        };
        let (fast, stats) = matmul_bsgs(&ev, &set, &ct, mk, &BsgsOptions::default())?;
        let (slow, _) = matmul_naive(&ev, &set, &ct, keys.rotation(1)?)?;
        let expected = matvec_mod(m.data(), rows, cols, &v, t);
        let fast = decrypt_output(&fast, rows, &keys.secret, &ctx)?.0;
        let slow = decrypt_output(&slow, rows, &keys.secret, &ctx)?.0;
        if fast != expected || slow != expected {
            wrong += 1;
        }
        if stats.rot_count as usize != (baby - 1) + (giant - 1) {
            law += 1;
        }
        let used: BTreeSet<usize> = stats.rotation_shifts.iter().copied().collect();
        if !used.is_subset(&BTreeSet::from([1, baby])) {
            economy += 1;
        }
    }
    Ok(vec![
        Check::new(
            "bsgs = naive = M·v mod t",
            wrong == 0,
            format!("{wrong}/{instances} wrong, {covered} with padded splits"),
        ),
        Check::new("rot count = (baby-1)+(giant-1)", law == 0, format!("{law} violations")),
        Check::new("only shifts {1, baby} requested", economy == 0, format!("{economy} violations")),
    ])
}

fn costmodel_suite() -> Result<Vec<Check>> {
    let lat = OperatorLatencies {
        ccadd_ms: 0.80,
        pcmul_ms: 0.80,
        rot_ms: 31.35,
    };
    let il = iteration_latency(&lat, 46, 2)?;
    let tl = total_latency(&lat, 23, 46, 2)?;
    let dsp = dsp_usage(2, 1, 897, 5123);
    Ok(vec![
        Check::new("iteration latency = 32.15 ms", (il - 32.15).abs() < 1e-9, format!("{il:.4} ms")),
        Check::new(
            "total latency = 2150.2 ms (2150 +- 0.5%)",
            (tl - 2150.2).abs() < 1e-9 && (tl - 2150.0).abs() / 2150.0 < 0.005,
            format!("{tl:.4} ms"),
        ),
        Check::new("DSP total = 6920", dsp == 6920, format!("{dsp}")),
    ])
}

fn dse_suite() -> Result<Vec<Check>> {
    let began = Instant::now();
    let ranking = explore(
        &DesignSpace::default(),
        &Workload::from_params(&HeParams::sophomr())?,
        &CostFixture::bundled(),
        &FpgaBudget::u55c(),
    )?;
    let elapsed = began.elapsed().as_secs_f64();
    let want = [(16, 2), (8, 4), (4, 8), (2, 16)].map(|(pc, pi)| DesignPoint {
        pc_ccadd: 16,
        pc_pcmul: pc,
        pi,
        pc_rot: 16,
        pb: 64,
    });
    let got: Vec<DesignPoint> = ranking.iter().take(4).map(|r| r.point).collect();
    let shown: Vec<String> = got.iter().map(ToString::to_string).collect();
    Ok(vec![Check::new(
        "U55C top 4 order",
        got == want && elapsed < 1.0,
        format!("{} in {elapsed:.3} s", shown.join(" ")),
    )])
}
