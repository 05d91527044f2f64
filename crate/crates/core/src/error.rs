use std::path::PathBuf;

/// Errors raised by the arithmetic, scheme, MatMul and cost-model layers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Parameters that cannot be realized (no NTT root, too few primes, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// Operands that do not belong together (domain, ring degree, modulus, key).
    #[error("usage error: {0}")]
    Usage(String),

    #[error("value {value} out of range for modulus {modulus}")]
    OutOfRange { value: u64, modulus: u64 },

    /// The ciphertext noise exceeded the decryption bound.
    #[error("decryption failed: noise budget exhausted ({budget_bits:.2} bits, log2|noise| = {noise_bits:.2})")]
    DecryptionFailure { budget_bits: f64, noise_bits: f64 },

    #[error("no rotation key for shift {shift}")]
    MissingKey { shift: usize },

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("malformed binary data: {0}")]
    Format(String),

    /// No design point of the explored grid fits the resource budget.
    #[error("budget too small: none of the {evaluated} design points is feasible")]
    BudgetTooSmall { evaluated: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
