//! Contravariant tensor fields on quantum state space and on the probability
//! simplex: Poisson and symmetric tensors, their Hamiltonian and gradient-like
//! vector fields, flows, and the algebraic structures they induce.

pub mod algebra;
pub mod checks;
pub mod contraction;
pub mod error;
pub mod field;
pub mod flow;
pub mod linalg;
pub mod operator;
pub mod poly;
pub mod quantum;
pub mod serialize;
pub mod simplex;
pub mod stochastic;

pub use error::{Error, Result};
pub use field::{PolyTensorField, PolyVectorField, Symmetry};
pub use poly::Poly;
