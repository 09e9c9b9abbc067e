//! Composite Gauss–Legendre quadrature for smooth matrix-valued integrands
//! on an interval. Nodes and weights come from Newton iteration on the
//! Legendre recurrence.

use crate::linalg::{c, CMatrix};

/// Panel order used by the composite rule.
const PANEL_ORDER: usize = 16;

/// Gauss–Legendre nodes and weights on [-1, 1] for a given order.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Tricomi-style initial guess, then Newton on P_n
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Legendre polynomial P_n(x) and derivative by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Integrate a matrix-valued function over [a, b] with roughly
/// `total_nodes` Gauss–Legendre nodes split into composite panels.
pub fn integrate_matrix<F>(f: F, a: f64, b: f64, total_nodes: usize) -> CMatrix
where
    F: Fn(f64) -> CMatrix,
{
    assert!(total_nodes >= 1);
    assert!(b >= a);
    if b == a {
        let probe = f(a);
        return CMatrix::zeros(probe.nrows(), probe.ncols());
    }
    let order = total_nodes.min(PANEL_ORDER);
    let panels = total_nodes.div_ceil(order);
    let (nodes, weights) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut acc: Option<CMatrix> = None;
    for p in 0..panels {
        let lo = a + h * p as f64;
        let mid = lo + 0.5 * h;
        let half = 0.5 * h;
        for (x, w) in nodes.iter().zip(&weights) {
            let term = f(mid + half * x) * c(w * half);
            acc = Some(match acc {
                Some(s) => s + term,
                None => term,
            });
        }
    }
    acc.expect("at least one panel")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, matrix_exp};

    #[test]
    fn low_order_nodes_match_known_values() {
        let (nodes, weights) = gauss_legendre(2);
        let r = 1.0 / 3.0_f64.sqrt();
        assert!((nodes[0] + r).abs() < 1e-14);
        assert!((nodes[1] - r).abs() < 1e-14);
        assert!((weights[0] - 1.0).abs() < 1e-14);
        assert!((weights[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        // order 5 integrates x^9 exactly
        let exact = 0.5_f64.powi(10) / 10.0;
        let val = integrate_matrix(|x| diag(&[crate::linalg::c(x.powi(9))]), 0.0, 0.5, 5)[(0, 0)].re;
        assert!((val - exact).abs() < 1e-16, "{val} vs {exact}");
    }

    #[test]
    fn integrates_matrix_exponential_derivative() {
        // int_0^1 e^{sA} A ds = e^A - I for commuting integrand
        let a = diag(&[crate::linalg::c(0.7), crate::linalg::c(-0.3)]);
        let got = integrate_matrix(|s| matrix_exp(&(&a * crate::linalg::c(s))).unwrap() * &a, 0.0, 1.0, 64);
        let expect = matrix_exp(&a).unwrap() - crate::linalg::identity(2);
        assert!((got - expect).norm() < 1e-13);
    }

    #[test]
    fn refinement_improves_smooth_integrals() {
        let f = |s: f64| diag(&[crate::linalg::c((10.0 * s).sin())]);
        let exact = (1.0 - 10.0_f64.cos()) / 10.0;
        let coarse = (integrate_matrix(f, 0.0, 1.0, 8)[(0, 0)].re - exact).abs();
        let fine = (integrate_matrix(f, 0.0, 1.0, 64)[(0, 0)].re - exact).abs();
        assert!(fine <= coarse);
        assert!(fine < 1e-12);
    }
}
