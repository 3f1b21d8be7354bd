//! Error type shared by the whole crate.

use thiserror::Error;

/// Everything that can go wrong across the numeric and symbolic layers.
///
/// Divergent quantities are *not* errors: norms and operator bounds return
/// `f64::INFINITY` as a value. Errors are reserved for malformed inputs and
/// for requests outside the supported catalog.
#[derive(Debug, Error)]
pub enum Error {
    /// Breakpoints must be strictly increasing and lie in (0, L].
    #[error("breakpoints must be strictly increasing, positive, and within the domain{0}")]
    NonMonotoneBreakpoints(String),

    /// Domain length must be positive (finite or +inf).
    #[error("domain length must be positive, got {0}")]
    NegativeLength(f64),

    /// `breaks` and `vals` must have the same number of entries.
    #[error("breakpoint/value length mismatch: {breaks} breakpoints vs {vals} values")]
    LengthMismatch { breaks: usize, vals: usize },

    /// A closed-form evaluation was requested at a point where the expression
    /// is singular or outside its piece cover.
    #[error("closed-form expression undefined at t = {0}")]
    EvaluableUndefinedAt(f64),

    /// A bank element or weak-unit block has zero (or non-finite) norm where a
    /// positive finite one is required.
    #[error("zero or non-finite norm where a positive finite norm is required: {0}")]
    ZeroNorm(String),

    /// The requested space/operation combination is outside the catalog.
    #[error("unsupported family or combination: {0}")]
    UnsupportedFamily(String),

    /// Function and space live on different measure spaces.
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    /// Exponent arithmetic for a factorization does not close (1/p ≠ 1/p0 + 1/p1).
    #[error("exponent mismatch: {0}")]
    ExponentMismatch(String),

    /// Weight arithmetic for a factorization does not close (w ≠ w0·w1).
    #[error("weight mismatch: {0}")]
    WeightMismatch(String),

    /// A rewrite or pipeline hypothesis failed its gate; the payload names the
    /// violated condition.
    #[error("hypothesis gate failed: {0}")]
    GateFailed(String),

    /// Expression-grammar parse error with byte offset.
    #[error("parse error at byte {at}: {msg}")]
    Parse { at: usize, msg: String },

    /// Malformed JSON for a step function, scenario registry, or report.
    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),

    /// File I/O while loading banks, registries, or emitting reports.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code mandated by the CLI contract: parse errors 2,
    /// gate failures 3 (check FAILs map to 4 in the harness), other errors 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Serde(_) => 2,
            Error::GateFailed(_) => 3,
            _ => 1,
        }
    }
}
