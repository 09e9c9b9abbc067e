//! Numerical laboratory for quantum Zeno product formulas on
//! finite-dimensional spaces.
//!
//! The crate simulates Zeno sequences (M e^{tL/n})ⁿ built from a contraction
//! M and a contraction semigroup e^{tL}, certifies explicit convergence
//! bounds instance by instance, and provides the supporting machinery:
//! dense complex linear algebra, semigroup construction and identity checks,
//! holomorphic functional calculus by contour quadrature, Chernoff-type
//! inequality checkers, transition-counting combinatorics, and named
//! reproducible scenario families.

pub mod chernoff;
pub mod error;
pub mod linalg;
pub mod quadrature;
pub mod random;
pub mod scenarios;
pub mod semigroup;
pub mod spectral;
pub mod zeno;

pub use error::{Result, ZenoError};
pub use linalg::{CMatrix, CVector};
