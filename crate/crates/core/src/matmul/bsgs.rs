use std::time::Instant;

use rayon::prelude::*;

use super::diagonal::{pack_vector, DiagonalSet, GiantStepOrder, MatMulPlan};
use super::stats::{ms, MatMulStats};
use crate::bfv::{
    decode, decrypt, encode, encrypt, Ciphertext, Evaluator, HeContext, OpCounts, PreparedPlaintext,
    RotationKey, SecretKey,
};
use crate::error::{Error, Result};

/// The two rotation keys the BSGS evaluation works with: shift 1 for the baby steps
/// and shift `baby` for the giant-step merges.
#[derive(Debug, Clone, Copy)]
pub struct MatMulKeys<'a> {
    pub one: &'a RotationKey,
    pub baby: &'a RotationKey,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BsgsOptions {
    /// Number of simulated PCmul cores. Above 1 the baby-step products of a
    /// giant step run concurrently on that many threads and are summed by
    /// a balanced tree.
    pub parallel_cores: usize,
}

impl Default for BsgsOptions {
    fn default() -> Self {
        Self { parallel_cores: 1 }
    }
}

struct Run<'e, 'c> {
    ev: &'e Evaluator<'c>,
    stats: MatMulStats,
    start: OpCounts,
    began: Instant,
}

impl<'e, 'c> Run<'e, 'c> {
    fn new(ev: &'e Evaluator<'c>) -> Self {
        Self {
            ev,
            stats: MatMulStats::default(),
            start: ev.counts(),
            began: Instant::now(),
        }
    }

    fn rotate(&mut self, ct: &Ciphertext, shift: usize, key: &RotationKey) -> Result<Ciphertext> {
        self.stats.rotation_shifts.push(shift);
        let t = Instant::now();
        let out = self.ev.rotate(ct, shift, Some(key));
        self.stats.rot_ms += ms(t.elapsed());
        out
    }

    fn add(&mut self, a: &Ciphertext, b: &Ciphertext) -> Result<Ciphertext> {
        let t = Instant::now();
        let out = self.ev.cc_add(a, b);
        self.stats.ccadd_ms += ms(t.elapsed());
        out
    }

    fn product(&mut self, diag: &[u64], ct: &Ciphertext) -> Result<Ciphertext> {
        let pt = encode(diag, self.ev.context())?;
        let t = Instant::now();
        let prepared = PreparedPlaintext::new(&pt, self.ev.context())?;
        let out = self.ev.pc_mul_prepared(&prepared, ct);
        self.stats.pcmul_ms += ms(t.elapsed());
        out
    }

    fn finish(mut self) -> MatMulStats {
        let end = self.ev.counts();
        self.stats.rot_count = end.rot - self.start.rot;
        self.stats.pcmul_count = end.pcmul - self.start.pcmul;
        self.stats.ccadd_count = end.ccadd - self.start.ccadd;
        self.stats.finish(self.began.elapsed());
        self.stats
    }
}

fn check_inputs(ctx: &HeContext, set: &DiagonalSet) -> Result<()> {
    if set.plan().slots != ctx.slot_count() {
        return Err(Error::Usage(format!(
            "diagonals span {} slots, parameters provide {}",
            set.plan().slots,
            ctx.slot_count()
        )));
    }
    if set.modulus() != ctx.t().value() {
        return Err(Error::Usage(format!(
            "matrix is over Z_{}, parameters use t = {}",
            set.modulus(),
            ctx.t().value()
        )));
    }
    Ok(())
}

fn check_key(ctx: &HeContext, key: &RotationKey, shift: usize, role: &str) -> Result<()> {
    let expected = ctx.galois_element(shift);
    if expected != 1 && key.galois_element() != expected {
        let got = ctx
            .shift_of_galois_element(key.galois_element())
            .map_or_else(|| format!("Galois element {}", key.galois_element()), |s| format!("shift {s}"));
        return Err(Error::Usage(format!(
            "{role} key must rotate by {shift}, got a key for {got}"
        )));
    }
    Ok(())
}

/// Reference evaluation `Σ_i diag_i ⊙ Rot^i(v)`, reaching every shift by
/// repeated single-step rotation.
pub fn matmul_naive(
    ev: &Evaluator<'_>,
    set: &DiagonalSet,
    ct_in: &Ciphertext,
    key_one: &RotationKey,
) -> Result<(Ciphertext, MatMulStats)> {
    let ctx = ev.context();
    check_inputs(ctx, set)?;
    let width = set.plan().width();
    if width > 1 {
        check_key(ctx, key_one, 1, "single-step")?;
    }
    let mut run = Run::new(ev);
    let mut current = ct_in.clone();
    let mut acc: Option<Ciphertext> = None;
    for i in 0..width {
        if i > 0 {
            current = run.rotate(&current, 1, key_one)?;
        }
        let term = run.product(&set.raw(i), &current)?;
        acc = Some(match acc {
            None => term,
            Some(sum) => run.add(&sum, &term)?,
        });
    }
    let out = acc.expect("at least one diagonal");
    Ok((out, run.finish()))
}

/// Baby-step/giant-step evaluation: `b̃ − 1` single-step rotations build the baby steps, each
/// giant step multiplies them with its `b̃` pre-rotated diagonals, and the
/// giant-step sums are merged Horner-style with rotations by `b̃`.
pub fn matmul_bsgs(
    ev: &Evaluator<'_>,
    set: &DiagonalSet,
    ct_in: &Ciphertext,
    keys: MatMulKeys<'_>,
    opts: &BsgsOptions,
) -> Result<(Ciphertext, MatMulStats)> {
    let ctx = ev.context();
    check_inputs(ctx, set)?;
    let plan = *set.plan();
    let (giant, baby) = (plan.giant, plan.baby);
    if baby > 1 {
        check_key(ctx, keys.one, 1, "baby-step")?;
    }
    if giant > 1 {
        check_key(ctx, keys.baby, baby, "giant-step")?;
    }
    let pool = (opts.parallel_cores > 1)
        .then(|| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(opts.parallel_cores)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))
        })
        .transpose()?;

    let mut run = Run::new(ev);
    let mut babies = Vec::with_capacity(baby);
    babies.push(ct_in.clone());
    for b in 1..baby {
        let next = run.rotate(&babies[b - 1], 1, keys.one)?;
        babies.push(next);
    }

    let mut out: Option<Ciphertext> = None;
    for step in 0..giant {
        let g = match set.order() {
            GiantStepOrder::Descending => giant - 1 - step,
            GiantStepOrder::Ascending => step,
        };
        let block = &set.diagonals()[g * baby..(g + 1) * baby];
        let sum = match &pool {
            None => {
                let mut sum = run.product(&block[0], &babies[0])?;
                for b in 1..baby {
                    let term = run.product(&block[b], &babies[b])?;
                    sum = run.add(&sum, &term)?;
                }
                sum
            }
            Some(pool) => parallel_giant_step(&mut run, pool, block, &babies)?,
        };
        out = Some(match out {
            None => sum,
            Some(prev) => {
                let rotated = run.rotate(&prev, baby, keys.baby)?;
                run.add(&rotated, &sum)?
            }
        });
    }
    let out = out.expect("at least one giant step");
    Ok((out, run.finish()))
}

fn parallel_giant_step(
    run: &mut Run<'_, '_>,
    pool: &rayon::ThreadPool,
    block: &[Vec<u64>],
    babies: &[Ciphertext],
) -> Result<Ciphertext> {
    let ev = run.ev;
    let ctx = ev.context();
    let t = Instant::now();
    let mut terms: Vec<Ciphertext> = pool.install(|| {
        block
            .par_iter()
            .zip(babies)
            .map(|(diag, ct)| {
                let pt = encode(diag, ctx)?;
                ev.pc_mul_prepared(&PreparedPlaintext::new(&pt, ctx)?, ct)
            })
            .collect::<Result<_>>()
    })?;
    run.stats.pcmul_ms += ms(t.elapsed());

    let t = Instant::now();
    while terms.len() > 1 {
        let carry = (terms.len() % 2 == 1).then(|| terms.pop()).flatten();
        let pairs: Vec<(Ciphertext, Ciphertext)> = {
            let mut it = terms.into_iter();
            std::iter::from_fn(|| Some((it.next()?, it.next()?))).collect()
        };
        terms = pool.install(|| {
            pairs
                .par_iter()
                .map(|(a, b)| ev.cc_add(a, b))
                .collect::<Result<Vec<_>>>()
        })?;
        terms.extend(carry);
    }
    run.stats.ccadd_ms += ms(t.elapsed());
    Ok(terms.pop().expect("non-empty giant step"))
}

/// Packs and encrypts the input vector for `plan`.
pub fn encrypt_input(
    v: &[u64],
    plan: &MatMulPlan,
    sk: &SecretKey,
    ctx: &HeContext,
    seed: u64,
) -> Result<Ciphertext> {
    let packed = pack_vector(v, plan)?;
    encrypt(&encode(&packed, ctx)?, sk, ctx, seed)
}

/// Decrypts a MatMul result and returns its first `rows` slots together
/// with the remaining noise budget.
pub fn decrypt_output(
    ct: &Ciphertext,
    rows: usize,
    sk: &SecretKey,
    ctx: &HeContext,
) -> Result<(Vec<u64>, f64)> {
    let d = decrypt(ct, sk, ctx)?;
    let mut slots = decode(&d.plaintext, ctx)?;
    slots.truncate(rows);
    Ok((slots, d.noise_budget_bits))
}
