//! Seeded random matrix ensembles used by scenario builders and sweeps:
//! complex Gaussians, Haar unitaries/isometries, Hermitian matrices, and
//! rank-k orthogonal projectors.

use crate::linalg::{c, dagger, CMatrix, CVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Standard complex Gaussian entry (real and imaginary parts N(0,1)).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix with iid standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Random Hermitian matrix (GUE-style, (G + Gᴴ)/2).
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = gaussian_matrix(dim, dim, rng);
    (&g + dagger(&g)) * c(0.5)
}

/// Haar-distributed isometry with `cols` orthonormal columns in dimension
/// `rows`, from the QR factorization of a complex Gaussian.
pub fn haar_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let g = gaussian_matrix(rows, cols, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    // fix the phase ambiguity so the distribution is Haar
    for j in 0..cols {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / c(d.norm());
            for i in 0..rows {
                q[(i, j)] *= phase.conj();
            }
        }
    }
    q
}

/// Haar-distributed unitary.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    haar_isometry(dim, dim, rng)
}

/// Haar-random pure state as a unit column vector.
pub fn haar_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
    let mut v = CVector::from_fn(dim, |_, _| complex_gaussian(rng));
    let n = v.norm();
    v /= c(n);
    v
}

/// Rank-`rank` Hermitian projector from a Haar frame.
pub fn random_projector<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> CMatrix {
    assert!(rank <= dim);
    let v = haar_isometry(dim, rank, rng);
    &v * dagger(&v)
}

/// Random full-rank density matrix from a Wishart sample GGᴴ/tr.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = gaussian_matrix(dim, dim, rng);
    let w = &g * dagger(&g);
    let tr: Complex64 = w.diagonal().iter().sum();
    w / tr
}
