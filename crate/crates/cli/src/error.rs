use std::path::PathBuf;

use thiserror::Error;

/// Failures of a command, each mapped to a distinct exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot access {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{0}")]
    Parse(String),

    /// The knots violate the step bound of the frequency vector.
    #[error("knot step h[{index}] = {step} is not below delta = {delta} (steps must satisfy h < delta)")]
    StepBound { index: usize, step: f64, delta: f64 },

    #[error("solver failure: {0}")]
    Solver(lspline_core::Error),

    #[error("{failed} selftest check(s) failed")]
    Selftest { failed: usize },
}

impl CliError {
    pub const EXIT_IO: i32 = 1;
    pub const EXIT_PARSE: i32 = 2;
    pub const EXIT_STEP_BOUND: i32 = 3;
    pub const EXIT_SOLVER: i32 = 4;
    pub const EXIT_SELFTEST: i32 = 5;

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => Self::EXIT_IO,
            CliError::Parse(_) => Self::EXIT_PARSE,
            CliError::StepBound { .. } => Self::EXIT_STEP_BOUND,
            CliError::Solver(_) => Self::EXIT_SOLVER,
            CliError::Selftest { .. } => Self::EXIT_SELFTEST,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<lspline_core::Error> for CliError {
    fn from(e: lspline_core::Error) -> Self {
        use lspline_core::Error as E;
        match e {
            E::StepTooLarge { index, step, delta } => CliError::StepBound { index, step, delta },
            E::InvalidInput(_) | E::Domain(_) => CliError::Parse(e.to_string()),
            E::Numerical(_) | E::ZeroDiagonal { .. } | E::SingularPivot { .. } | E::SingularSystem => {
                CliError::Solver(e)
            }
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
