//! Exact linear algebra over Q and prime fields.

mod echelon;
mod matrix;
mod scalar;
pub mod sparse;

pub use echelon::Echelon;
pub use matrix::{Cokernel, Matrix, Solver};
pub use scalar::{Field, Scalar};
pub use sparse::SparseVec;
