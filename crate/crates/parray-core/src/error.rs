use thiserror::Error;

/// Crate-wide error type. Variants map onto the failure classes the
/// front ends distinguish: configuration problems, I/O, and everything
/// numerical/physical in between.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside a function's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input is syntactically fine but outside the regime where the
    /// underlying physical model is trustworthy.
    #[error("model validity: {0}")]
    ModelValidity(String),

    /// Inconsistent or physically impossible scene description.
    #[error("geometry error: {0}")]
    Geometry(String),

    /// Linear algebra or iteration failure (singular system, divergence).
    #[error("numerical error: {0}")]
    Numerical(String),

    /// Caller broke an API precondition (mismatched grids, conventions).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Requested accuracy is unreachable with the supplied discretization.
    #[error("accuracy error: {0}")]
    Accuracy(String),

    /// Invalid run configuration (files, bounds, GA setup).
    #[error("configuration error: {0}")]
    Config(String),

    /// A batch run failed in too many trials to be trusted.
    #[error("harness error: {0}")]
    Harness(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
