use crate::grid::Point;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("mask has {got} entries, expected {expected}")]
    MaskSize { expected: usize, got: usize },

    /// A missing pixel sits too close to the image edge for boundary data to be read.
    #[error("missing pixel ({}, {}) lies within 2 pixels of the image edge", .0.i, .0.j)]
    CollarTooThin(Point),

    #[error("boundary data extraction at ({}, {}) needs a pixel that is missing or off the image", .0.i, .0.j)]
    CollarViolation(Point),

    #[error("point ({}, {}) is not an interior lattice point", .0.i, .0.j)]
    NotInterior(Point),

    #[error("missing boundary value at ({}, {})", .0.i, .0.j)]
    MissingBoundaryValue(Point),

    #[error("missing normal derivative at ({}, {})", .0.i, .0.j)]
    MissingNormalDerivative(Point),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("empty trace list")]
    EmptyTraces,

    #[error("system with {0} unknowns exceeds the dense solver limit")]
    TooLarge(usize),

    #[error("singular matrix")]
    Singular,

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix diagonal is zero or of mixed sign")]
    IndefiniteDiagonal,

    /// CG stopped without reaching the tolerance; `iterate` is the last iterate.
    #[error("no convergence after {iterations} iterations (relative residual {relative_residual:e})")]
    MaxIterations {
        iterations: usize,
        relative_residual: f64,
        iterate: Vec<f64>,
    },

    #[error("non-positive error value {0}")]
    NonPositiveError(f64),

    #[error("at least two error values are required")]
    TooFewErrors,

    #[error("malformed PNM: {0}")]
    Pnm(String),

    #[error("image mismatch: {0}")]
    ImageMismatch(String),
}

impl Error {
    /// True for failures raised by the linear solvers.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::Singular
                | Error::NotSymmetric
                | Error::IndefiniteDiagonal
                | Error::MaxIterations { .. }
                | Error::TooLarge(_)
        )
    }
}
