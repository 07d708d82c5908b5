use crate::capacity::CapacityResult;

/// Errors shared across the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A coordinate, joint index, or individual index is out of range.
    #[error("index out of range: {0}")]
    Index(String),

    /// A matrix column is not a probability distribution (negative entry or
    /// column sum outside the stochasticity tolerance).
    #[error("not column-stochastic: {0}")]
    NonStochastic(String),

    /// Shapes of the inputs do not line up.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The selection enumeration would exceed the configured cap.
    #[error("enumeration of {projected} selections exceeds cap {cap}")]
    EnumerationTooLarge { projected: u128, cap: u64 },

    /// The capacity solver did not reach the requested bracket width; the
    /// partial result carries the best bracket seen so far.
    #[error("no convergence after {iterations} iterations (bracket width {gap:.3e})")]
    Convergence {
        iterations: u64,
        gap: f64,
        partial: Box<CapacityResult>,
    },

    /// A discretization grid does not cover enough of the distribution mass.
    #[error("grid error: {0}")]
    Grid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
