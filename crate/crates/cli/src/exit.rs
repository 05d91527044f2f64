use omr_core::Error;

pub const SUCCESS: u8 = 0;
/// A result disagreed with its oracle, or decryption ran out of noise budget.
pub const VERIFICATION: u8 = 1;
/// Bad flags, unreadable or malformed input files.
pub const USAGE: u8 = 2;
/// No design point fits the resource budget.
pub const INFEASIBLE: u8 = 3;

/// Marks an error as a failed check rather than a usage problem.
#[derive(Debug)]
pub struct CheckFailed(pub String);

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CheckFailed {}

pub fn code_for(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<CheckFailed>().is_some() {
        return VERIFICATION;
    }
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::DecryptionFailure { .. } => VERIFICATION,
                Error::BudgetTooSmall { .. } => INFEASIBLE,
                _ => USAGE,
            };
        }
    }
    USAGE
}
