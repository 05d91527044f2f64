use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use omr_core::bfv::serial::{read_rotation_key, read_secret_key, write_rotation_key, write_secret_key};
use omr_core::bfv::{gen_rotation_key, keygen, HeContext, RotationKey, SecretKey};
use omr_core::Error;

use crate::args::{Cli, KeygenArgs};
use crate::{exit, params};

pub const SECRET_KEY_FILE: &str = "secret.key";

pub fn rotation_key_file(dir: &Path, shift: usize) -> PathBuf {
    dir.join(format!("rot_{shift}.key"))
}

/// Secret key plus rotation keys indexed by shift.
pub struct KeySet {
    pub secret: SecretKey,
    pub rotations: BTreeMap<usize, RotationKey>,
}

impl KeySet {
    /// Derives every key from `seed`: the secret key from `seed` itself and
    /// the key for shift `s` from `seed + 1 + s`.
    pub fn generate(ctx: &HeContext, seed: u64, shifts: &[usize]) -> Result<Self> {
        let secret = keygen(ctx, seed);
        let mut rotations = BTreeMap::new();
        for &s in shifts {
            if let std::collections::btree_map::Entry::Vacant(slot) = rotations.entry(s) {
                slot.insert(gen_rotation_key(ctx, &secret, s, seed.wrapping_add(1 + s as u64))?);
            }
        }
        Ok(Self { secret, rotations })
    }

    pub fn load(dir: &Path, ctx: &HeContext, shifts: &[usize]) -> Result<Self> {
        let secret = read_secret_key(&mut open(&dir.join(SECRET_KEY_FILE))?, ctx)
            .with_context(|| format!("reading {}", dir.join(SECRET_KEY_FILE).display()))?;
        let mut rotations = BTreeMap::new();
        for &s in shifts {
            let path = rotation_key_file(dir, s);
            let key = read_rotation_key(&mut open(&path)?, ctx)
                .with_context(|| format!("reading {}", path.display()))?;
            if key.galois_element() != ctx.galois_element(s) {
                bail!(Error::Usage(format!("{} does not rotate by {s}", path.display())));
            }
            rotations.insert(s, key);
        }
        Ok(Self { secret, rotations })
    }

    pub fn rotation(&self, shift: usize) -> Result<&RotationKey> {
        self.rotations
            .get(&shift)
            .ok_or_else(|| Error::MissingKey { shift }.into())
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    match File::open(path) {
        Ok(f) => Ok(BufReader::new(f)),
        Err(e) => bail!(Error::Usage(format!("cannot open key file {}: {e}", path.display()))),
    }
}

pub fn run(args: &KeygenArgs, cli: &Cli) -> Result<u8> {
    let params = params::load(&args.params.params, cli.full)?;
    let seed = args.seed.unwrap_or(params.seed);
    let mut shifts = args.shifts.clone();
    if shifts.is_empty() {
        shifts.push(1);
        if let Some(shape) = params.matmul.filter(|m| m.baby > 1) {
            shifts.push(shape.baby);
        }
    }
    let ctx = HeContext::new(params)?;
    std::fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;

    let began = Instant::now();
    let keys = KeySet::generate(&ctx, seed, &shifts)?;
    let mut w = BufWriter::new(File::create(args.out.join(SECRET_KEY_FILE))?);
    write_secret_key(&mut w, &keys.secret)?;
    w.flush()?;
    for (&shift, key) in &keys.rotations {
        let path = rotation_key_file(&args.out, shift);
        let mut w = BufWriter::new(File::create(&path)?);
        write_rotation_key(&mut w, key)?;
        w.flush()?;
        let bytes = std::fs::metadata(&path)?.len();
        println!(
            "{}: shift {shift}, {bytes} bytes ({:.2} MiB)",
            path.display(),
            bytes as f64 / (1u64 << 20) as f64
        );
    }
    println!("generated {} rotation keys in {:.1} s", keys.rotations.len(), began.elapsed().as_secs_f64());
    Ok(exit::SUCCESS)
}

