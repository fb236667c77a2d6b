use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the computation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature stopped before reaching the requested tolerance.
    #[error(
        "quadrature did not converge: estimated error {estimate:.3e} exceeds tolerance {tolerance:.3e} after {evaluations} evaluations"
    )]
    Quadrature {
        estimate: f64,
        tolerance: f64,
        evaluations: usize,
    },

    /// A request exceeds the size of a precomputed table or a hard limit.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// A series or iteration could not certify the requested accuracy.
    #[error("precision error: achieved {achieved:.3e}, required {required:.3e}")]
    Precision { achieved: f64, required: f64 },

    /// Caller-supplied data is missing or inconsistent.
    #[error("data error: {0}")]
    Data(String),

    /// Reading or writing a cache file failed.
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
