use thiserror::Error;

/// Errors raised by the simulator and the analysis drivers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("capacity exceeded: {what} (requested dimension 2^{n_sites} = {dim})")]
    Capacity {
        what: String,
        n_sites: usize,
        dim: u128,
    },

    #[error("site {site} out of range for a chain of {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("invalid measurement axis: {0}")]
    InvalidAxis(String),

    #[error("invalid chain specification: {0}")]
    InvalidChain(String),

    #[error("measurement times out of order: first at {first}, second at {second}")]
    Ordering { first: f64, second: f64 },

    #[error("chain length mismatch: protocol with n = {n} needs {expected} sites, propagator has {actual}")]
    ChainMismatch {
        n: usize,
        expected: usize,
        actual: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Krylov evolution did not converge: residual {residual:.3e} > tolerance {tolerance:.3e}")]
    Convergence { residual: f64, tolerance: f64 },

    #[error("numerical degeneracy: {0}")]
    Degenerate(String),

    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    InvalidConfig(Vec<String>),

    #[error("missing first-violation time for n = {0:?}")]
    MissingViolation(Vec<usize>),

    #[error("i/o: {0}")]
    Io(String),

    #[error("malformed result file: {0}")]
    Format(String),
}

impl Error {
    /// True for errors caused by bad input rather than a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Capacity { .. }
                | Error::SiteOutOfRange { .. }
                | Error::InvalidAxis(_)
                | Error::InvalidChain(_)
                | Error::Ordering { .. }
                | Error::ChainMismatch { .. }
                | Error::InvalidArgument(_)
                | Error::InvalidConfig(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
