//! Errors shared across the crate.

use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by construction, linear algebra, and checker routines.
#[derive(Debug, Error)]
pub enum ZenoError {
    /// Input violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The shift z is (numerically) in the spectrum, so (z - A) cannot be
    /// inverted to working precision.
    #[error("resolvent singular at z = {z} (condition estimate {cond:.3e})")]
    ResolventSingular { z: Complex64, cond: f64 },

    /// A contour integral passes too close to an eigenvalue.
    #[error("contour passes through the spectrum near z = {z}")]
    ContourThroughSpectrum { z: Complex64 },

    /// Adaptive quadrature hit its node cap without converging.
    #[error("contour quadrature did not converge within {max_nodes} nodes (last change {last_change:.3e})")]
    QuadratureFailure { max_nodes: usize, last_change: f64 },

    /// An iterative numerical routine failed to converge.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// A peripheral eigenvalue carries a non-negligible quasinilpotent part,
    /// so the matrix is not uniformly power convergent.
    #[error("not power convergent: peripheral nilpotent norm {nilpotent_norm:.3e} exceeds {tol:.1e}")]
    NotPowerConvergent { nilpotent_norm: f64, tol: f64 },

    /// Problem size exceeds a hard resource cap.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// A sampling-based estimator discarded every sample.
    #[error("estimation failure: {0}")]
    EstimationFailure(String),

    /// Not enough usable data points for a fit.
    #[error("too few points: {got} usable points, need at least {need}")]
    TooFewPoints { got: usize, need: usize },
}

pub type Result<T> = std::result::Result<T, ZenoError>;
