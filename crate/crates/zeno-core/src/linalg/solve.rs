//! Linear solves and resolvents via pivoted LU.

use super::{identity, norm_1, CMatrix};
use crate::error::{Result, ZenoError};
use num_complex::Complex64;

/// Condition-number cap beyond which a shifted system is declared singular.
pub const RESOLVENT_COND_CAP: f64 = 1e12;

/// Solve a·x = b by pivoted LU.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() || a.nrows() != b.nrows() {
        return Err(ZenoError::InvalidInput(format!(
            "solve expects square a and matching rhs, got {}x{} and {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let lu = a.clone().lu();
    lu.solve(b)
        .ok_or_else(|| ZenoError::NumericalFailure("LU solve: singular matrix".into()))
}

/// Resolvent R(z, a) = (z − a)⁻¹ by pivoted LU, with a 1-norm condition
/// estimate guarding against shifts too close to the spectrum.
pub fn resolvent(a: &CMatrix, z: Complex64) -> Result<CMatrix> {
    if !a.is_square() {
        return Err(ZenoError::InvalidInput(format!(
            "resolvent requires a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let n = a.nrows();
    if n == 0 {
        return Err(ZenoError::InvalidInput(
            "resolvent of a dimension-zero matrix".into(),
        ));
    }
    let shifted = identity(n) * z - a;
    let lu = shifted.clone().lu();
    let r = lu
        .solve(&identity(n))
        .ok_or(ZenoError::ResolventSingular { z, cond: f64::INFINITY })?;
    let cond = norm_1(&shifted) * norm_1(&r);
    if !cond.is_finite() || cond > RESOLVENT_COND_CAP {
        return Err(ZenoError::ResolventSingular { z, cond });
    }
    Ok(r)
}
