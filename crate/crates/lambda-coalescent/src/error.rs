use thiserror::Error;

/// Errors surfaced by the library. Numeric failures (quadrature, root
/// finding) are kept distinct from configuration problems so the CLI can
/// map them to different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature for {what} did not converge: estimate {estimate:.6e}, residual error {error:.3e} after {panels} panels")]
    Quadrature {
        what: String,
        estimate: f64,
        error: f64,
        panels: usize,
    },

    #[error("root finding for {what} failed on [{lo:.6e}, {hi:.6e}]")]
    RootFinding { what: String, lo: f64, hi: f64 },

    #[error("state {n} exceeds the rate table capacity n_max = {n_max}")]
    ExceedsTable { n: u64, n_max: u64 },

    #[error("exact distribution cost guard: n = {n} exceeds the limit {limit}")]
    CostGuard { n: u64, limit: u64 },

    #[error("limit regime is unknown: tabulated measures carry no analytic tail")]
    RegimeUnknown,

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// CLI exit code: 3 for numeric failures, 2 for everything else
    /// (verification failures exit 1 and are not errors).
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Quadrature { .. } | Error::RootFinding { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
