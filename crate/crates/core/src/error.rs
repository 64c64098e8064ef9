use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed input: empty or non-finite frequencies, unsorted knots, length mismatches.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An argument lies outside the region where the requested quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A knot step violates the step bound `h < delta` of the frequency vector.
    #[error("knot step h[{index}] = {step} violates the step bound delta = {delta}")]
    StepTooLarge { index: usize, step: f64, delta: f64 },

    /// A denominator underflowed or a value left the finite range.
    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("zero diagonal entry in row {row}")]
    ZeroDiagonal { row: usize },

    /// Unpivoted elimination met a pivot below the relative threshold.
    #[error("pivot {pivot:e} in row {row} is below the elimination threshold")]
    SingularPivot { row: usize, pivot: f64 },

    #[error("linear system is numerically singular")]
    SingularSystem,
}

pub type Result<T> = std::result::Result<T, Error>;
