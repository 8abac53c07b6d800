use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("point outside the domain: {0}")]
    Domain(String),

    #[error("{what} is not differentiable at {at:?}")]
    Singular { what: String, at: Vec<f64> },

    #[error("exact quadrature does not cover {0}")]
    NotInCatalog(String),

    #[error("rejection sampler starved: accepted {accepted} of {drawn} draws")]
    Starved { accepted: usize, drawn: usize },

    #[error("nested quadrature budget exceeded: {needed} evaluations > {budget}")]
    Budget { needed: usize, budget: usize },

    #[error("ball measure underflow ({0:e})")]
    Underflow(f64),

    #[error("all sweep rows failed; first error: {0}")]
    SweepFailed(String),

    #[error("degenerate fit: {0}")]
    Fit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
