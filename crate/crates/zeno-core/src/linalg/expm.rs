//! Matrix exponential via scaling-and-squaring with a diagonal Padé(13)
//! approximant, following Higham, "The Scaling and Squaring Method for the
//! Matrix Exponential Revisited", SIAM J. Matrix Anal. Appl. 26(4).

use super::{c, identity, norm_1, solve, CMatrix};
use crate::error::{Result, ZenoError};

/// Padé(13,13) numerator coefficients (Higham, eq. 10.33).
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Scaling threshold θ₁₃ for the order-13 approximant.
const THETA13: f64 = 5.371_920_351_148_152;

/// Compute exp(a) for a square complex matrix.
///
/// The scaling power is chosen from the 1-norm so that ‖a/2ˢ‖₁ ≤ θ₁₃, then
/// the Padé(13) approximant is squared back up.
pub fn matrix_exp(a: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() {
        return Err(ZenoError::InvalidInput(format!(
            "matrix_exp requires a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let n = a.nrows();
    if n == 0 {
        return Err(ZenoError::InvalidInput(
            "matrix_exp of a dimension-zero matrix".into(),
        ));
    }
    if n == 1 {
        let mut out = CMatrix::zeros(1, 1);
        out[(0, 0)] = a[(0, 0)].exp();
        return Ok(out);
    }

    let norm = norm_1(a);
    if !norm.is_finite() {
        return Err(ZenoError::InvalidInput(
            "matrix_exp of a matrix with non-finite entries".into(),
        ));
    }
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as u32
    } else {
        0
    };
    let a_scaled = a * c(0.5_f64.powi(s as i32));

    let mut result = pade13(&a_scaled)?;
    for _ in 0..s {
        result = &result * &result;
    }
    Ok(result)
}

/// Padé(13,13) approximant of exp for ‖a‖₁ ≤ θ₁₃.
fn pade13(a: &CMatrix) -> Result<CMatrix> {
    let n = a.nrows();
    let eye = identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let u_inner = &a6 * c(PADE13[13]) + &a4 * c(PADE13[11]) + &a2 * c(PADE13[9]);
    let u_poly = &a6 * &u_inner
        + &a6 * c(PADE13[7])
        + &a4 * c(PADE13[5])
        + &a2 * c(PADE13[3])
        + &eye * c(PADE13[1]);
    let u = a * u_poly;

    let v_inner = &a6 * c(PADE13[12]) + &a4 * c(PADE13[10]) + &a2 * c(PADE13[8]);
    let v = &a6 * &v_inner
        + &a6 * c(PADE13[6])
        + &a4 * c(PADE13[4])
        + &a2 * c(PADE13[2])
        + &eye * c(PADE13[0]);

    // exp(a) ≈ (v - u)^{-1} (v + u)
    let rhs = &v + &u;
    let lhs = &v - &u;
    solve(&lhs, &rhs).map_err(|_| {
        ZenoError::NumericalFailure("Padé denominator is numerically singular".into())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dagger, diag, operator_norm, zeros};
    use crate::random::gaussian_matrix;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exp_of_zero_is_identity() {
        let e = matrix_exp(&zeros(3, 3)).unwrap();
        assert!((e - identity(3)).norm() < 1e-15);
    }

    #[test]
    fn exp_of_diagonal() {
        let e = matrix_exp(&diag(&[c(1.0), c(-1.0)])).unwrap();
        let expect = diag(&[c(1.0_f64.exp()), c((-1.0_f64).exp())]);
        assert!((e - expect).norm() < 1e-13);
    }

    #[test]
    fn exp_rejects_non_square() {
        assert!(matrix_exp(&zeros(2, 3)).is_err());
    }

    #[test]
    fn exp_matches_taylor_series_oracle() {
        // 30-term truncated series as an independent oracle, ‖a‖ ≤ 2
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..5 {
            let g = gaussian_matrix(4, 4, &mut rng);
            let a = &g * c(2.0 / operator_norm(&g).unwrap());
            let mut oracle = identity(4);
            let mut term = identity(4);
            for k in 1..=30 {
                term = &term * &a / c(k as f64);
                oracle += &term;
            }
            let e = matrix_exp(&a).unwrap();
            assert!((&e - &oracle).norm() < 1e-11, "residual {}", (&e - &oracle).norm());
        }
    }

    #[test]
    fn exp_of_antihermitian_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let g = gaussian_matrix(5, 5, &mut rng);
        let h = (&g + dagger(&g)) * c(0.5);
        let u = matrix_exp(&(h * Complex64::new(0.0, -1.0))).unwrap();
        assert!((dagger(&u) * &u - identity(5)).norm() < 1e-12);
    }

    #[test]
    fn exp_with_large_norm_scales_correctly() {
        let a = diag(&[c(100.0), c(-100.0)]);
        let e = matrix_exp(&a).unwrap();
        let big = 100.0_f64.exp();
        assert!((e[(0, 0)].re - big).abs() / big < 1e-12);
        assert!((e[(1, 1)].re - (-100.0_f64).exp()).abs() < 1e-30);
    }

    #[test]
    fn exp_inverse_consistency_at_moderate_norm() {
        // exp(A)·exp(−A) = 1 stays tight through the scaling-and-squaring
        // path at ‖A‖ ≈ 40
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let g = gaussian_matrix(4, 4, &mut rng);
        let h = (&g + dagger(&g)) * c(0.5);
        let a = &h * Complex64::new(0.0, -40.0 / operator_norm(&h).unwrap());
        let forward = matrix_exp(&a).unwrap();
        let backward = matrix_exp(&(-&a)).unwrap();
        assert!((forward * backward - identity(4)).norm() < 1e-10);
    }

    #[test]
    fn exp_is_multiplicative_for_commuting_arguments() {
        // commuting pair built as polynomials in one matrix
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let g = gaussian_matrix(4, 4, &mut rng);
        let x = &g * c(0.5 / operator_norm(&g).unwrap());
        let a = &x * &x + &x * c(0.3);
        let b = &x * c(0.9) - &x * &x * &x;
        let lhs = matrix_exp(&(&a + &b)).unwrap();
        let rhs = matrix_exp(&a).unwrap() * matrix_exp(&b).unwrap();
        assert!((lhs - rhs).norm() < 1e-10);
    }
}
