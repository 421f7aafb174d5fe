//! Exact computations with finite-dimensional dg categories, dg modules and
//! kernels (bimodules) between them, over the rationals or a prime field.

pub mod category;
pub mod complex;
pub mod corpus;
pub mod error;
pub mod io;
pub mod kernel;
pub mod linalg;
pub mod module;
pub mod par;
pub mod resolution;
pub mod validation;

pub use complex::{ChainMap, Cohomology, Complex, GradedMap};
pub use error::{Error, Result};
pub use linalg::{Field, Matrix, Scalar};
pub use validation::{Identity, ValidationReport, Verdict, Violation};
