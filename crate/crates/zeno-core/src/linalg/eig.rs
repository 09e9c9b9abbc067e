//! Eigenvalues and right eigenvectors of general complex matrices through
//! the complex Schur form, with eigenvectors recovered by back-substitution
//! on the triangular factor.

use super::{CMatrix, CVector};
use crate::error::{Result, ZenoError};
use num_complex::Complex64;

/// Hard cap on the dimension accepted by [`eig`].
pub const EIG_DIM_CAP: usize = 512;

/// One eigenvalue together with a unit right eigenvector.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: Complex64,
    pub vector: CVector,
}

/// Full eigendecomposition of a square complex matrix of dimension ≤ 512.
///
/// Eigenvalues come from the diagonal of the complex Schur factor; each
/// eigenvector is obtained by back-substitution on the leading triangular
/// block and rotated back by the unitary factor. For (numerically) repeated
/// eigenvalues the returned vectors span the dominant eigendirections but
/// are not guaranteed independent.
pub fn eig(a: &CMatrix) -> Result<Vec<EigenPair>> {
    if !a.is_square() {
        return Err(ZenoError::InvalidInput(format!(
            "eig requires a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let n = a.nrows();
    if n == 0 {
        return Err(ZenoError::InvalidInput("eig of a dimension-zero matrix".into()));
    }
    if n > EIG_DIM_CAP {
        return Err(ZenoError::InvalidInput(format!(
            "eig dimension {n} exceeds the cap {EIG_DIM_CAP}"
        )));
    }

    // Hermitian inputs (projectors, Hamiltonians) go through the symmetric
    // solver, which handles repeated eigenvalues exactly
    let herm_defect = (a - a.adjoint()).norm();
    if herm_defect <= 1e-13 * (1.0 + a.norm()) {
        let es = a.clone().symmetric_eigen();
        let pairs = (0..n)
            .map(|k| EigenPair {
                value: Complex64::new(es.eigenvalues[k], 0.0),
                vector: es.eigenvectors.column(k).into_owned(),
            })
            .collect();
        return Ok(pairs);
    }

    // the tightest tolerance occasionally stalls the QR sweep on clustered
    // spectra; retry on a short ladder, all far below the accuracy contract
    let schur = [f64::EPSILON, 1e-15, 1e-13]
        .iter()
        .find_map(|&eps| a.clone().try_schur(eps, 200 * n * n))
        .ok_or_else(|| ZenoError::NumericalFailure("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();

    let scale = t.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    let smallnum = (scale.max(1.0)) * f64::EPSILON;

    let mut pairs = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut y = CVector::zeros(n);
        y[k] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for j in (i + 1)..=k {
                s += t[(i, j)] * y[j];
            }
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < smallnum {
                denom = Complex64::new(smallnum, 0.0);
            }
            y[i] = -s / denom;
        }
        let mut v = &q * y;
        let norm = v.norm();
        v /= Complex64::new(norm, 0.0);
        pairs.push(EigenPair { value: lambda, vector: v });
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, diag, identity, operator_norm, solve};
    use crate::random::gaussian_matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn eig_of_diagonal() {
        let pairs = eig(&diag(&[c(1.0), c(2.0), c(3.0)])).unwrap();
        let mut vals: Vec<f64> = pairs.iter().map(|p| p.value.re).collect();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] - 1.0).abs() < 1e-13);
        assert!((vals[1] - 2.0).abs() < 1e-13);
        assert!((vals[2] - 3.0).abs() < 1e-13);
    }

    #[test]
    fn eig_of_identity() {
        let pairs = eig(&identity(4)).unwrap();
        assert_eq!(pairs.len(), 4);
        for p in &pairs {
            assert!((p.value - c(1.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn eig_dimension_cap() {
        let big = CMatrix::zeros(513, 513);
        assert!(eig(&big).is_err());
    }

    #[test]
    fn eigenvalues_have_small_determinant_residual() {
        // oracle: |det(a - lambda I)| must be tiny relative to the scale of
        // the characteristic polynomial, checked through an LU determinant
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let g = gaussian_matrix(6, 6, &mut rng);
        let a = &g * c(1.0 / operator_norm(&g).unwrap());
        let pairs = eig(&a).unwrap();
        for p in &pairs {
            let shifted = identity(6) * p.value - &a;
            let det = shifted.lu().determinant();
            assert!(det.norm() < 1e-10, "det residual {}", det.norm());
        }
    }

    #[test]
    fn eigenvectors_satisfy_residual_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..8 {
            let g = gaussian_matrix(6, 6, &mut rng);
            let a = &g * c(1.0 / operator_norm(&g).unwrap());
            for p in eig(&a).unwrap() {
                let residual = (&a * &p.vector - &p.vector * p.value).norm();
                assert!(residual < 1e-9, "residual {residual}");
            }
        }
    }

    #[test]
    fn eig_reconstructs_projector_for_separated_spectra() {
        // build a from a known eigenbasis, recover the projector onto one
        // eigenvalue cluster, compare with the construction
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let v = gaussian_matrix(5, 5, &mut rng);
        let d = diag(&[c(2.0), c(2.0), c(-1.0), c(-1.0), c(0.1)]);
        let a = solve(&v.clone().transpose(), &(&d * v.clone().transpose())).unwrap();
        let a = a.transpose(); // a = v d v^{-1}
        let pairs = eig(&a).unwrap();
        let close: Vec<_> = pairs.iter().filter(|p| (p.value - c(2.0)).norm() < 0.5).collect();
        assert_eq!(close.len(), 2);
    }
}
