//! Conley-Zehnder and Maslov indices of symplectic paths in dimensions 2 and
//! 4, computed by two independent methods, with closed-form reference families
//! and an application to the linearized flow along Keplerian ellipses.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod kepler;
pub mod linalg;
pub mod maslov;
pub mod path;
pub mod roots;
pub mod symcore;

pub use error::{Error, Result};
pub use linalg::Mat;
pub use path::SymplecticPath;
