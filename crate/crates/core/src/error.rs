use thiserror::Error;

/// Crate-wide error type. Variants distinguish problems a caller can fix
/// (configuration, domain) from runtime failures of the numerical method.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid problem or discretization setup (bad dimension, unknown law,
    /// a time step that does not divide the final time, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// A query outside the object's domain of definition, e.g. evaluating a
    /// field at a point outside the unit cell or a coefficient outside [0, T].
    #[error("domain error: {0}")]
    Domain(String),

    /// Direct linear solver failure: singular pivot or a solution whose
    /// relative residual exceeds the hard bound.
    #[error("linear solve failed: {0}")]
    Solver(String),

    /// The time march produced a non-finite or explosively growing iterate.
    #[error("solution diverged at step {step}: {reason}")]
    Divergence { step: usize, reason: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
