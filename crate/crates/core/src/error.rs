use thiserror::Error;

/// Errors produced while building or running thermal models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("argument {x} lies outside [-1, 1]")]
    Domain { x: f64 },

    #[error("cannot build Robin basis function {index}: singular 2x2 system")]
    BasisConstruction { index: usize },

    #[error("degenerate boundary pair {pair}: scalar determinant vanishes")]
    DegenerateBoundary { pair: &'static str },

    #[error("ill-conditioned basis: {0}")]
    IllConditioned(String),

    #[error("quadrature not converged: relative change {deviation:e} after doubling the order")]
    AssemblyAccuracy { deviation: f64 },

    #[error("singular matrix: {0}")]
    SingularMatrix(&'static str),

    #[error("discretization is numerically unstable: {0}")]
    Instability(String),

    #[error("non-finite state at step {step}")]
    NumericalFailure { step: usize },

    #[error("unsupported cell shape: {0}")]
    UnsupportedShape(String),

    #[error("reference solver failed: {0}")]
    Oracle(String),
}

pub type Result<T> = std::result::Result<T, Error>;
