//! Error type shared across the crate.

use thiserror::Error;

/// Errors split by the exit-code contract of the CLI: format errors are
/// usage-level (exit 2), domain and cap errors are computation-level
/// (exit 1).
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: bad file syntax, out-of-range table entry,
    /// mismatched lengths.
    #[error("format error: {0}")]
    Format(String),
    /// Structurally well-formed input that violates a mathematical
    /// precondition; the message names the failed axiom or condition and a
    /// witness.
    #[error("domain error: {0}")]
    Domain(String),
    /// An exhaustive search or chain-group construction exceeded its cap.
    #[error("resource cap exceeded: {0}")]
    Cap(String),
}

pub type Result<T> = std::result::Result<T, Error>;
