use thiserror::Error;

use crate::flow::Trajectory;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("basis is not trace-orthonormal (max deviation {0:.3e})")]
    InvalidBasis(f64),

    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("not a density matrix: {0}")]
    InvalidState(String),

    #[error("degenerate flow: normalization {0:.3e} vanishes")]
    DegenerateFlow(f64),

    #[error("polynomial degree {degree} exceeds the supported maximum {max}")]
    DegreeOverflow { degree: usize, max: usize },

    #[error("point lies outside the chart domain: {0}")]
    OutsideChart(String),

    #[error("probability vector touches the boundary (p[{index}] = {value})")]
    Boundary { index: usize, value: f64 },

    #[error("generator is not affine on the leaf")]
    NotAffine,

    #[error("matrix is singular (det = {0:.3e})")]
    Singular(f64),

    #[error("matrix is not bistochastic")]
    NotBistochastic,

    #[error("integration diverged at t = {at}")]
    Divergence { at: f64, partial: Box<Trajectory> },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
