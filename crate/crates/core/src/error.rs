use core::fmt;

/// Errors produced by the analysis and solver routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `|c|` is below the degeneracy threshold; the root formulas divide by `c`.
    DegenerateStencil { c: f64, threshold: f64 },
    /// No experiment case is registered under this id.
    UnknownCase(u32),
    /// The complex square root has nonpositive real part after branch
    /// correction, which can only happen when `4ac < b^2` is violated.
    BranchFailure,
    /// A denominator of the contraction factor vanished.
    Pole,
    /// A parameter or override violates its contract.
    InvalidParameter(&'static str),
    /// The equioscillation function never changes sign over the scan interval.
    NoRoot { lo: f64, hi: f64 },
    /// Banded elimination hit a zero pivot column.
    SingularSystem { column: usize },
    /// Too few residual entries to estimate a rate.
    InsufficientData,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateStencil { c, threshold } => write!(
                f,
                "degenerate stencil: c = {c:e} is within threshold {threshold:e} of zero"
            ),
            Error::UnknownCase(id) => write!(f, "unknown case id {id}, expected 1..=7"),
            Error::BranchFailure => write!(
                f,
                "square-root branch failure: 4ac < b^2 must have been violated"
            ),
            Error::Pole => write!(f, "contraction-factor denominator vanished"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::NoRoot { lo, hi } => write!(
                f,
                "equioscillation function has no sign change on [{lo}, {hi}]"
            ),
            Error::SingularSystem { column } => {
                write!(f, "singular banded system: zero pivot at column {column}")
            }
            Error::InsufficientData => write!(f, "too few residual entries to estimate a rate"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
