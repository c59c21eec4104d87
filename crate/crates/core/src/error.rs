use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The adaptive rule ran out of its evaluation budget before reaching the target.
    #[error(
        "quadrature did not converge after {evaluations} evaluations \
         (best value {value:e}, error estimate {error_estimate:e}, target {target:e})"
    )]
    NoConvergence {
        value: f64,
        error_estimate: f64,
        target: f64,
        evaluations: usize,
    },

    /// A constant that is only cited (never stated) was needed but not configured.
    #[error("external constant {name} is not configured for n = {n}")]
    MissingConstant { name: &'static str, n: u32 },

    #[error("invalid group: {0}")]
    Group(String),

    /// An enumerated element has |trace| < 2, so the group is not torsion-free.
    #[error("elliptic element {word} with |trace| = {trace} found; group is not torsion-free")]
    Torsion { word: String, trace: f64 },

    #[error("query up to length {requested} exceeds completeness horizon {horizon}")]
    BeyondHorizon { requested: f64, horizon: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}
