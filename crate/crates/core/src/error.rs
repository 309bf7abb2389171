use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("malformed series: {0}")]
    Format(String),

    #[error("singular evaluation: {0}")]
    Singular(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("unknown name `{0}`")]
    UnknownName(String),

    /// The closure parameter fell outside `[0, p)`, so no class exists at it.
    #[error("vacuous closure parameter {0}")]
    Vacuous(f64),

    #[error("quadrature did not converge: estimate {estimate}, error bound {error}")]
    Quadrature { estimate: f64, error: f64 },
}

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
