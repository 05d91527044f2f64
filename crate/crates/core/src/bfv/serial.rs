//! Binary layout of keys and ciphertexts.
//!
//! Every artifact starts with a 16-byte header of four little-endian `u32`
//! words: `magic`, `version`, `n`, `limb_count`. The body is a sequence of
//! little-endian `u64` words. Polynomials are written limb-major: all `n`
//! residues of limb 0, then limb 1, and so on.
//!
//! | artifact      | magic  | body                                                       |
//! |---------------|--------|------------------------------------------------------------|
//! | ciphertext    | `OMCT` | domain, encoding, c0, c1                                   |
//! | rotation key  | `OMRK` | galois element, dnum, then per digit: b, a (over PQ)       |
//! | secret key    | `OMSK` | `n` two's-complement coefficients in {-1, 0, 1}            |
//!
//! `domain` is 0 for coefficient and 1 for NTT; `encoding` is 0 for slots and
//! 1 for coefficients. Ciphertext `limb_count` is the number of Q limbs,
//! rotation key `limb_count` the number of PQ limbs, secret key `limb_count` 1.

use std::io::{Read, Write};

use super::cipher::{Ciphertext, Provenance};
use super::context::HeContext;
use super::encoding::Encoding;
use super::keys::{RotationKey, SecretKey};
use super::rns::RnsPoly;
use crate::error::{Error, Result};
use crate::modring::{CoeffVector, Domain, NttTables};

pub const FORMAT_VERSION: u32 = 1;
pub const HEADER_BYTES: usize = 16;

const MAGIC_CIPHERTEXT: [u8; 4] = *b"OMCT";
const MAGIC_ROTATION_KEY: [u8; 4] = *b"OMRK";
const MAGIC_SECRET_KEY: [u8; 4] = *b"OMSK";

fn write_header(w: &mut impl Write, magic: [u8; 4], n: usize, limbs: usize) -> Result<()> {
    w.write_all(&magic)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    w.write_all(&(n as u32).to_le_bytes())?;
    w.write_all(&(limbs as u32).to_le_bytes())?;
    Ok(())
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_header(r: &mut impl Read, magic: [u8; 4], ctx: &HeContext) -> Result<usize> {
    let mut m = [0u8; 4];
    r.read_exact(&mut m)?;
    if m != magic {
        return Err(Error::Format(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(&m),
            String::from_utf8_lossy(&magic)
        )));
    }
    let version = read_u32(r)?;
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let n = read_u32(r)? as usize;
    if n != ctx.n() {
        return Err(Error::Format(format!("ring degree {n}, parameters use {}", ctx.n())));
    }
    Ok(read_u32(r)? as usize)
}

fn write_poly(w: &mut impl Write, p: &RnsPoly) -> Result<()> {
    let mut buf = Vec::with_capacity(p.n() * 8);
    for limb in p.limbs() {
        buf.clear();
        for &c in limb.coeffs() {
            buf.extend_from_slice(&c.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    Ok(())
}

fn read_poly(r: &mut impl Read, basis: &[NttTables], domain: Domain) -> Result<RnsPoly> {
    let mut limbs = Vec::with_capacity(basis.len());
    let mut buf = vec![0u8; basis.first().map_or(0, |t| t.n()) * 8];
    for t in basis {
        r.read_exact(&mut buf)?;
        let coeffs = buf
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().expect("8-byte chunk")))
            .collect();
        limbs.push(CoeffVector::new(coeffs, t.modulus(), domain).map_err(|e| Error::Format(e.to_string()))?);
    }
    RnsPoly::new(limbs)
}

fn domain_word(d: Domain) -> u64 {
    match d {
        Domain::Coefficient => 0,
        Domain::Ntt => 1,
    }
}

fn word_domain(w: u64) -> Result<Domain> {
    match w {
        0 => Ok(Domain::Coefficient),
        1 => Ok(Domain::Ntt),
        other => Err(Error::Format(format!("unknown domain tag {other}"))),
    }
}

pub fn write_ciphertext(w: &mut impl Write, ct: &Ciphertext) -> Result<()> {
    write_header(w, MAGIC_CIPHERTEXT, ct.c0().n(), ct.c0().limb_count())?;
    w.write_all(&domain_word(ct.domain()).to_le_bytes())?;
    let enc: u64 = match ct.encoding() {
        Encoding::Slots => 0,
        Encoding::Coefficients => 1,
    };
    w.write_all(&enc.to_le_bytes())?;
    write_poly(w, ct.c0())?;
    write_poly(w, ct.c1())
}

pub fn read_ciphertext(r: &mut impl Read, ctx: &HeContext) -> Result<Ciphertext> {
    let limbs = read_header(r, MAGIC_CIPHERTEXT, ctx)?;
    if limbs != ctx.q_count() {
        return Err(Error::Format(format!("{limbs} limbs, parameters use {}", ctx.q_count())));
    }
    let domain = word_domain(read_u64(r)?)?;
    let encoding = match read_u64(r)? {
        0 => Encoding::Slots,
        1 => Encoding::Coefficients,
        other => return Err(Error::Format(format!("unknown encoding tag {other}"))),
    };
    let c0 = read_poly(r, ctx.q_tables(), domain)?;
    let c1 = read_poly(r, ctx.q_tables(), domain)?;
    Ciphertext::new(c0, c1, encoding, Provenance::Derived)
}

pub fn write_rotation_key(w: &mut impl Write, key: &RotationKey) -> Result<()> {
    let (n, limbs) = key
        .digits()
        .first()
        .map_or((0, 0), |(b, _)| (b.n(), b.limb_count()));
    write_header(w, MAGIC_ROTATION_KEY, n, limbs)?;
    w.write_all(&(key.galois_element() as u64).to_le_bytes())?;
    w.write_all(&(key.dnum() as u64).to_le_bytes())?;
    for (b, a) in key.digits() {
        write_poly(w, b)?;
        write_poly(w, a)?;
    }
    Ok(())
}

pub fn read_rotation_key(r: &mut impl Read, ctx: &HeContext) -> Result<RotationKey> {
    let limbs = read_header(r, MAGIC_ROTATION_KEY, ctx)?;
    if limbs != ctx.pq_tables().len() {
        return Err(Error::Format(format!(
            "{limbs} limbs, parameters use {}",
            ctx.pq_tables().len()
        )));
    }
    let galois_element = read_u64(r)? as usize;
    let dnum = read_u64(r)? as usize;
    if dnum != ctx.digits().len() {
        return Err(Error::Format(format!("dnum {dnum}, parameters use {}", ctx.digits().len())));
    }
    let mut digits = Vec::with_capacity(dnum);
    for _ in 0..dnum {
        let b = read_poly(r, ctx.pq_tables(), Domain::Ntt)?;
        let a = read_poly(r, ctx.pq_tables(), Domain::Ntt)?;
        digits.push((b, a));
    }
    Ok(RotationKey::from_parts(galois_element, digits))
}

pub fn write_secret_key(w: &mut impl Write, sk: &SecretKey) -> Result<()> {
    write_header(w, MAGIC_SECRET_KEY, sk.coefficients().len(), 1)?;
    for &c in sk.coefficients() {
        w.write_all(&c.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_secret_key(r: &mut impl Read, ctx: &HeContext) -> Result<SecretKey> {
    let limbs = read_header(r, MAGIC_SECRET_KEY, ctx)?;
    if limbs != 1 {
        return Err(Error::Format(format!("secret key with {limbs} limbs")));
    }
    let coeffs = (0..ctx.n())
        .map(|_| read_u64(r).map(|w| w as i64))
        .collect::<Result<Vec<_>>>()?;
    SecretKey::from_coefficients(coeffs, ctx).map_err(|e| Error::Format(e.to_string()))
}

/// Exact serialized size of a rotation key: header, two metadata words, and
/// `2 · dnum · |PQ| · n` words.
pub fn rotation_key_serialized_bytes(n: usize, pq_limbs: usize, dnum: usize) -> usize {
    HEADER_BYTES + 16 + 2 * dnum * pq_limbs * n * 8
}

/// Information content of a rotation key, `2 · n · dnum · log2(PQ)` bits,
/// in bytes. A format packing each limb to its bit width would reach this;
/// the word-aligned layout above is larger by `64 / limb_bits`.
pub fn rotation_key_packed_bytes(n: usize, log_pq_bits: u32, dnum: usize) -> u64 {
    (2 * n as u64 * dnum as u64 * log_pq_bits as u64).div_ceil(8)
}
