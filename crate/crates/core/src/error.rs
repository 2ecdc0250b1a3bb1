use thiserror::Error;

/// Errors raised anywhere in the simulation pipeline.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of a numerical function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series expansion failed to converge within its term cap.
    #[error("no convergence after {terms} terms (last residual {residual:e})")]
    Convergence { terms: usize, residual: f64 },

    /// A caller violated a documented precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// An invalid physical or schedule parameter.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Amplitude reached the edge of the finite node array.
    #[error("boundary contact at node index {node} during {phase}")]
    Boundary { node: usize, phase: &'static str },

    /// Total probability drifted away from one.
    #[error("normalization drift {drift:e} after {phase}")]
    Normalization { drift: f64, phase: &'static str },

    /// Failure in a linear-algebra routine.
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
