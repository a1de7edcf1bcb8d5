use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("imaginary residual {residual:e} exceeds tolerance {tol:e}")]
    ImaginaryResidual { residual: f64, tol: f64 },

    #[error("missing coefficient at n = {0}")]
    MissingCoefficient(u64),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("step size {0} does not evenly divide 1")]
    StepSizeInvalid(f64),

    #[error("range error: {0}")]
    Range(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no zero found on [{from}, {to}]")]
    NoZeroFound { from: f64, to: f64 },

    #[error("limit {limit} exceeds guard {guard}")]
    LimitExceeded { limit: u64, guard: u64 },

    #[error("prime table covers {have} but {need} is required")]
    TableTooSmall { have: u64, need: u64 },

    #[error("sequence lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("sequence is not invertible: f(1) = {0}")]
    NotInvertible(f64),

    #[error("line {line}: parse error: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: validation error: {msg}")]
    Validation { line: usize, msg: String },

    #[error("line {line}: primes not strictly ascending")]
    Order { line: usize },

    #[error("dataset does not cover prime {0}")]
    IncompleteCoverage(u64),

    #[error("no Ramanujan prime in dataset")]
    NoneFound,

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by bad input (as opposed to a computation that
    /// could not produce its result).
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::StepSizeInvalid(_)
                | Error::Range(_)
                | Error::Domain(_)
                | Error::LimitExceeded { .. }
                | Error::TableTooSmall { .. }
                | Error::LengthMismatch(..)
                | Error::Parse { .. }
                | Error::Validation { .. }
                | Error::Order { .. }
                | Error::IncompleteCoverage(_)
                | Error::Io(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
