//! Operator (spectral) norm and trace norm of dense complex matrices.

use super::CMatrix;
use crate::error::{Result, ZenoError};

/// Above this dimension the spectral norm falls back to power iteration on
/// AᴴA instead of a full SVD.
pub const SVD_DIM_CAP: usize = 512;

/// Relative tolerance of the power-iteration fallback.
pub const POWER_ITERATION_TOL: f64 = 1e-12;

/// Iteration cap of the power-iteration fallback.
pub const POWER_ITERATION_MAX: usize = 10_000;

/// Largest singular value of `a`.
///
/// Uses a full SVD up to [`SVD_DIM_CAP`] and power iteration on AᴴA above.
pub fn operator_norm(a: &CMatrix) -> Result<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Err(ZenoError::InvalidInput(
            "operator_norm of a dimension-zero matrix".into(),
        ));
    }
    if a.nrows().max(a.ncols()) <= SVD_DIM_CAP {
        let svd = a.clone().svd(false, false);
        Ok(svd.singular_values.max())
    } else {
        power_iteration_norm(a)
    }
}

/// Sum of singular values of a square matrix.
pub fn trace_norm(a: &CMatrix) -> Result<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Err(ZenoError::InvalidInput(
            "trace_norm of a dimension-zero matrix".into(),
        ));
    }
    if !a.is_square() {
        return Err(ZenoError::InvalidInput(format!(
            "trace_norm requires a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let svd = a.clone().svd(false, false);
    Ok(svd.singular_values.iter().sum())
}

/// Power iteration on AᴴA; converges to ‖A‖² for generic starts.
fn power_iteration_norm(a: &CMatrix) -> Result<f64> {
    let n = a.ncols();
    // deterministic quasi-random start, no RNG dependency here
    let mut v = nalgebra::DVector::from_fn(n, |i, _| {
        num_complex::Complex64::new(1.0 + (i as f64 * 0.7391).sin(), (i as f64 * 0.3571).cos())
    });
    v /= num_complex::Complex64::new(v.norm(), 0.0);
    let mut lambda = 0.0_f64;
    for _ in 0..POWER_ITERATION_MAX {
        let w = a.adjoint() * (a * &v);
        let norm = w.norm();
        if norm == 0.0 {
            return Ok(0.0);
        }
        let next = norm; // Rayleigh quotient approximation since ‖v‖ = 1
        v = w / num_complex::Complex64::new(norm, 0.0);
        if (next - lambda).abs() <= POWER_ITERATION_TOL * next.max(1.0) {
            return Ok(next.sqrt());
        }
        lambda = next;
    }
    Err(ZenoError::NumericalFailure(
        "power iteration on AᴴA did not converge".into(),
    ))
}
