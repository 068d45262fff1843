use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("empty matrix")]
    EmptyMatrix,

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("solver found {found} distinct solutions, expected {expected}")]
    CountMismatch { expected: usize, found: usize },

    #[error("solution set is not zero-dimensional ({singular} singular solutions)")]
    NotZeroDimensional { singular: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("cubic is not generic: {0}")]
    NonGenericCubic(String),

    #[error("expected 5 coplanar sextuples, found {found}")]
    NoPentahedron { found: usize },

    #[error("no convergence after {starts} starts (best relative residual {best_residual:e})")]
    NoConvergence { starts: usize, best_residual: f64 },

    #[error("two converged decompositions differ (distance {distance:e})")]
    UniquenessViolated { distance: f64 },

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("empty fiber: h(n+1) - N - 1 = {value}")]
    EmptyFiber { value: i64 },

    #[error("intersection is not transverse after {attempts} attempts")]
    NonTransverse { attempts: usize },

    #[error("degenerate random draw after {attempts} attempts")]
    DegenerateDraw { attempts: usize },

    #[error("result failed verification: residual {residual:e} exceeds {tol:e}")]
    Inaccurate { residual: f64, tol: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
