//! Dense complex linear algebra primitives shared by every other module:
//! norms, exponentials, resolvent solves and eigendecompositions, all on
//! column-major `DMatrix<Complex64>` carriers.

mod eig;
mod expm;
mod norms;
mod solve;

pub use eig::{eig, EigenPair};
pub use expm::matrix_exp;
pub use norms::{operator_norm, trace_norm};
pub use solve::{resolvent, solve};

use crate::error::{Result, ZenoError};
use num_complex::Complex64;

/// Dense complex matrix, the universal carrier for operators, generators,
/// projections, resolvents, and (as single columns) vectors.
pub type CMatrix = nalgebra::DMatrix<Complex64>;

/// Dense complex vector.
pub type CVector = nalgebra::DVector<Complex64>;

/// Shorthand for a real number promoted to a complex scalar.
#[inline]
pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Shorthand for the imaginary unit.
#[inline]
pub fn im() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

/// n-dimensional identity.
pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Zero matrix.
pub fn zeros(rows: usize, cols: usize) -> CMatrix {
    CMatrix::zeros(rows, cols)
}

/// Diagonal matrix from complex entries.
pub fn diag(entries: &[Complex64]) -> CMatrix {
    let n = entries.len();
    let mut m = CMatrix::zeros(n, n);
    for (i, &e) in entries.iter().enumerate() {
        m[(i, i)] = e;
    }
    m
}

/// Conjugate transpose.
pub fn dagger(a: &CMatrix) -> CMatrix {
    a.adjoint()
}

/// Commutator [a, b] = ab - ba.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Kronecker product a ⊗ b.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Column-stacking vectorization of a square matrix.
pub fn vec_col(a: &CMatrix) -> CVector {
    CVector::from_iterator(a.nrows() * a.ncols(), a.iter().cloned())
}

/// Inverse of [`vec_col`] for a d² vector.
pub fn unvec_col(v: &CVector, dim: usize) -> CMatrix {
    assert_eq!(v.len(), dim * dim, "unvec dimension mismatch");
    CMatrix::from_iterator(dim, dim, v.iter().cloned())
}

/// Matrix power by binary decomposition of the exponent.
pub fn matrix_power(a: &CMatrix, n: u64) -> CMatrix {
    assert!(a.is_square(), "matrix_power requires a square matrix");
    let dim = a.nrows();
    let mut result = identity(dim);
    let mut base = a.clone();
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            result = &result * &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Reject matrices with NaN or infinite entries.
pub fn check_finite(a: &CMatrix) -> Result<()> {
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(ZenoError::InvalidInput(
            "matrix contains non-finite entries".into(),
        ));
    }
    Ok(())
}

/// Hermiticity defect ‖a − aᴴ‖ in the Frobenius norm.
pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    (a - a.adjoint()).norm()
}

/// Max column sum of absolute values (the induced 1-norm).
pub fn norm_1(a: &CMatrix) -> f64 {
    let mut max_sum = 0.0_f64;
    for j in 0..a.ncols() {
        let mut col_sum = 0.0;
        for i in 0..a.nrows() {
            col_sum += a[(i, j)].norm();
        }
        max_sum = max_sum.max(col_sum);
    }
    max_sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_power_matches_naive_product() {
        let a = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.3), Complex64::new(0.1, 0.2), c(-0.4), c(0.7)],
        );
        let mut naive = identity(2);
        for n in 0..12u64 {
            assert!((matrix_power(&a, n) - &naive).norm() < 1e-12, "n = {n}");
            naive = &naive * &a;
        }
    }

    #[test]
    fn vec_unvec_roundtrip() {
        let a = CMatrix::from_fn(3, 3, |i, j| Complex64::new(i as f64, j as f64));
        let v = vec_col(&a);
        assert_eq!(unvec_col(&v, 3), a);
        // column stacking: entry (i, j) lands at index j*rows + i
        assert_eq!(v[1], a[(1, 0)]);
        assert_eq!(v[3], a[(0, 1)]);
    }

    #[test]
    fn check_finite_rejects_nan() {
        let mut a = identity(2);
        a[(0, 1)] = Complex64::new(f64::NAN, 0.0);
        assert!(check_finite(&a).is_err());
    }
}
