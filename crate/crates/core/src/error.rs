use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("exponent violates admissibility: {0}")]
    Assumption(String),

    #[error("special function failed at {what}({arg})")]
    SpecialFunction { what: &'static str, arg: f64 },

    #[error("weight b[{n}][{k}] could not be evaluated: {source}")]
    Weight {
        n: usize,
        k: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("quadrature did not converge on [{a}, {b}] (estimate {value}, error {error})")]
    Quadrature { a: f64, b: f64, value: f64, error: f64 },

    #[error("tridiagonal elimination hit a zero pivot in row {row} (pivot {pivot})")]
    ZeroPivot { row: usize, pivot: f64 },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("non-finite value in snapshot {step}")]
    NonFinite { step: usize },

    #[error("time step too large: 1 + b[n][n] = {value} is not positive (tau = {tau})")]
    StepTooLarge { tau: f64, value: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for failures raised while time stepping, as opposed to bad input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::ZeroPivot { .. }
                | Error::NonFinite { .. }
                | Error::StepTooLarge { .. }
                | Error::Quadrature { .. }
                | Error::SpecialFunction { .. }
                | Error::Weight { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
