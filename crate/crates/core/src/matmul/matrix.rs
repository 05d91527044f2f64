//! Dense matrices over `Z_t` and their on-disk forms.
//!
//! Text form: the first non-comment line holds `N k t`, followed by `N·k`
//! whitespace-separated entries in row-major order. `#` starts a comment that
//! runs to the end of the line.
//!
//! Binary form: magic `OMMX`, then little-endian `u32` version, `u32` rows,
//! `u32` cols, `u64` t, followed by `rows·cols` little-endian `u64` entries.
//!
//! A vector is a matrix with one row.

use std::io::Write;
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};

const MAGIC: [u8; 4] = *b"OMMX";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    modulus: u64,
    data: Vec<u64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, modulus: u64, data: Vec<u64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Usage("matrix must have at least one row and one column".into()));
        }
        if modulus < 2 {
            return Err(Error::Usage(format!("plaintext modulus {modulus} is too small")));
        }
        if data.len() != rows * cols {
            return Err(Error::Usage(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&v| v >= modulus) {
            return Err(Error::OutOfRange { value: bad, modulus });
        }
        Ok(Self {
            rows,
            cols,
            modulus,
            data,
        })
    }

    pub fn from_rows(rows: &[Vec<u64>], modulus: u64) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Usage("rows have different lengths".into()));
        }
        Self::new(rows.len(), cols, modulus, rows.concat())
    }

    pub fn vector(values: Vec<u64>, modulus: u64) -> Result<Self> {
        let len = values.len();
        Self::new(1, len, modulus, values)
    }

    pub fn zeros(rows: usize, cols: usize, modulus: u64) -> Result<Self> {
        Self::new(rows, cols, modulus, vec![0; rows * cols])
    }

    pub fn random(rows: usize, cols: usize, modulus: u64, rng: &mut impl Rng) -> Result<Self> {
        let data = (0..rows * cols).map(|_| rng.gen_range(0..modulus)).collect();
        Self::new(rows, cols, modulus, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[u64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    /// Plaintext product `M·v mod t`.
    pub fn mul_vector(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::Usage(format!(
                "vector of length {} for a matrix with {} columns",
                v.len(),
                self.cols
            )));
        }
        let t = self.modulus as u128;
        Ok((0..self.rows)
            .map(|r| {
                let acc = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .fold(0u128, |acc, (&a, &b)| (acc + a as u128 * b as u128) % t);
                acc as u64
            })
            .collect())
    }

    pub fn parse_text(text: &str, path: &Path) -> Result<Self> {
        let err = |line: usize, message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut tokens = text.lines().enumerate().flat_map(|(i, line)| {
            let body = line.split('#').next().unwrap_or("");
            body.split_whitespace().map(move |tok| (i + 1, tok))
        });
        let mut header = [0u64; 3];
        for (slot, name) in header.iter_mut().zip(["row count", "column count", "modulus"]) {
            let (line, tok) = tokens
                .next()
                .ok_or_else(|| err(0, format!("missing {name} in header")))?;
            *slot = tok
                .parse()
                .map_err(|_| err(line, format!("invalid {name} `{tok}`")))?;
        }
        let [rows, cols, modulus] = header;
        let (rows, cols) = (rows as usize, cols as usize);
        let mut data = Vec::with_capacity(rows.saturating_mul(cols).min(1 << 24));
        let mut last_line = 1;
        for (line, tok) in tokens {
            last_line = line;
            let v: u64 = tok
                .parse()
                .map_err(|_| err(line, format!("invalid entry `{tok}`")))?;
            if v >= modulus {
                return Err(err(line, format!("entry {v} is not below t = {modulus}")));
            }
            data.push(v);
        }
        if data.len() != rows * cols {
            return Err(err(
                last_line,
                format!("expected {} entries, found {}", rows * cols, data.len()),
            ));
        }
        Self::new(rows, cols, modulus, data).map_err(|e| err(1, e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.rows, self.cols, self.modulus);
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(u64::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_binary(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 24 || bytes[..4] != MAGIC {
            return Err(Error::Format("missing OMMX header".into()));
        }
        let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().expect("4 bytes"));
        let u64_at = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().expect("8 bytes"));
        let version = u32_at(4);
        if version != VERSION {
            return Err(Error::Format(format!("unsupported matrix version {version}")));
        }
        let (rows, cols, modulus) = (u32_at(8) as usize, u32_at(12) as usize, u64_at(16));
        let body = &bytes[24..];
        if body.len() != rows * cols * 8 {
            return Err(Error::Format(format!(
                "{} payload bytes for a {rows}x{cols} matrix",
                body.len()
            )));
        }
        let data = body
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        Self::new(rows, cols, modulus, data)
    }

    pub fn to_binary(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(24 + self.data.len() * 8);
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(self.rows as u32).to_le_bytes());
        out.extend_from_slice(&(self.cols as u32).to_le_bytes());
        out.extend_from_slice(&self.modulus.to_le_bytes());
        for v in &self.data {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    /// Reads either form, telling them apart by the binary magic.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path)?;
        if bytes.starts_with(&MAGIC) {
            return Self::parse_binary(&bytes);
        }
        let text = String::from_utf8(bytes).map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: "neither OMMX binary nor UTF-8 text".into(),
        })?;
        Self::parse_text(&text, path)
    }

    /// Writes the binary form when `path` ends in `.bin`, text otherwise.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut file = std::fs::File::create(path)?;
        if path.extension().is_some_and(|e| e == "bin") {
            file.write_all(&self.to_binary())?;
        } else {
            file.write_all(self.to_text().as_bytes())?;
        }
        Ok(())
    }
}
