use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Every variant maps onto one of three process exit categories
/// (see [`Error::exit_code`]): validation problems, numerical failures
/// and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("scenario parse error: {0}")]
    Parse(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("divergent expectations: rho * slope = {0} >= 1")]
    DivergentExpectations(f64),

    #[error("numerical blow-up at t = {time}: {detail}")]
    NumericalBlowup { time: f64, detail: String },

    #[error("power iteration did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error(
        "no positive small-gain weights exist: spectral radius {rho} >= 1 \
         (Lyapunov destruction: no such weights exist)"
    )]
    WeightsNonexistent { rho: f64 },

    #[error("statistical error: {0}")]
    Statistical(String),

    #[error("diagnostic error: {0}")]
    Diagnostic(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status for the CLI: 2 for invalid input, 3 for
    /// numerical failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::Validation(_)
            | Error::Parse(_)
            | Error::Infeasible(_)
            | Error::DivergentExpectations(_) => 2,
            Error::NumericalBlowup { .. }
            | Error::NonConvergence { .. }
            | Error::WeightsNonexistent { .. }
            | Error::Statistical(_)
            | Error::Diagnostic(_)
            | Error::Numerical(_) => 3,
            Error::Io(_) => 1,
        }
    }
}

pub(crate) fn config<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

pub(crate) fn validation<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}
