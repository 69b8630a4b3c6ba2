use num_complex::Complex64;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("structural mismatch: {0}")]
    Structure(String),

    #[error("empty energy window: {0}")]
    EmptyWindow(String),

    #[error(
        "quadrature did not converge: partial value {value}, error estimate {error:.3e} above tolerance {tolerance:.3e}"
    )]
    NoConvergence {
        value: Complex64,
        error: f64,
        tolerance: f64,
    },

    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Process exit codes used by the command-line front end.
pub mod exit_code {
    pub const SUCCESS: i32 = 0;
    pub const CONFIG: i32 = 2;
    pub const NUMERIC: i32 = 3;
    pub const IO: i32 = 4;
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter(_) | Error::Structure(_) | Error::EmptyWindow(_) | Error::Config(_) => {
                exit_code::CONFIG
            }
            Error::NoConvergence { .. } | Error::IllConditioned(_) => exit_code::NUMERIC,
            Error::Io(_) => exit_code::IO,
        }
    }
}

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
