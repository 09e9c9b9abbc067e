//! Chernoff-type inequality checkers and Trotter product-formula rate
//! measurement: the √n lemma, the modified lemma with the (n/2)‖(C−1)²x‖
//! right side, its approximate variant for near-projection families, and
//! the first-order product-formula bound.

use crate::error::{Result, ZenoError};
use crate::linalg::{c, identity, matrix_exp, matrix_power, operator_norm, CMatrix, CVector};
use crate::semigroup::GeneratorSpec;
use crate::zeno::{ErrorEntry, ErrorSeries};

/// Machine-noise allowance on checked inequalities.
pub const SLACK_TOL: f64 = 1e-9;

/// Contraction slack accepted on checker inputs.
pub const CONTRACTION_TOL: f64 = 1e-9;

/// Number of points in the geometric sampling grids used to spot-check
/// functional hypotheses.
pub const HYPOTHESIS_SAMPLES: usize = 32;

/// Ratio of consecutive points in the geometric sampling grids.
const HYPOTHESIS_GRID_RATIO: f64 = 0.7;

/// Both sides of a checked inequality, with slack = rhs − lhs and a short
/// description of the inputs.
#[derive(Debug, Clone)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub witness: String,
}

impl InequalityReport {
    pub fn new(lhs: f64, rhs: f64, witness: impl Into<String>) -> Self {
        Self { lhs, rhs, slack: rhs - lhs, witness: witness.into() }
    }

    /// Whether the inequality holds up to machine noise.
    pub fn holds(&self) -> bool {
        self.slack >= -SLACK_TOL
    }
}

fn require_contraction(c_op: &CMatrix, who: &str) -> Result<()> {
    let norm = operator_norm(c_op)?;
    if norm > 1.0 + CONTRACTION_TOL {
        return Err(ZenoError::InvalidInput(format!(
            "{who} requires a contraction, got norm {norm:.12}"
        )));
    }
    Ok(())
}

/// √n-Lemma: ‖Cⁿx − e^{n(C−1)}x‖ ≤ √n ‖(C−1)x‖ for contractions C.
pub fn chernoff_sqrt_n(c_op: &CMatrix, n: u64, x: &CVector) -> Result<InequalityReport> {
    if n < 1 {
        return Err(ZenoError::InvalidInput("chernoff checks need n >= 1".into()));
    }
    require_contraction(c_op, "chernoff_sqrt_n")?;
    let dim = c_op.nrows();
    let semigroup = matrix_exp(&((c_op - identity(dim)) * c(n as f64)))?;
    let lhs = (matrix_power(c_op, n) * x - semigroup * x).norm();
    let rhs = (n as f64).sqrt() * ((c_op * x) - x).norm();
    Ok(InequalityReport::new(lhs, rhs, format!("sqrt-n n={n} dim={dim}")))
}

/// Modified Chernoff lemma: ‖(Cⁿ − e^{n(C−1)})x‖ ≤ (n/2)‖(C−1)²x‖.
pub fn chernoff_modified(c_op: &CMatrix, n: u64, x: &CVector) -> Result<InequalityReport> {
    if n < 1 {
        return Err(ZenoError::InvalidInput("chernoff checks need n >= 1".into()));
    }
    require_contraction(c_op, "chernoff_modified")?;
    let dim = c_op.nrows();
    let semigroup = matrix_exp(&((c_op - identity(dim)) * c(n as f64)))?;
    let lhs = (matrix_power(c_op, n) * x - semigroup * x).norm();
    let shifted = c_op - identity(dim);
    let rhs = n as f64 / 2.0 * (&shifted * (&shifted * x)).norm();
    Ok(InequalityReport::new(lhs, rhs, format!("modified n={n} dim={dim}")))
}

/// Geometric grid descending from `top`, used for hypothesis spot-checks.
fn geometric_grid(top: f64) -> Vec<f64> {
    (0..HYPOTHESIS_SAMPLES)
        .map(|k| top * HYPOTHESIS_GRID_RATIO.powi(k as i32))
        .collect()
}

/// Approximate modified Chernoff lemma for families C(t), P(t) near a norm-1
/// projection p: checks the sampled hypotheses P(t)² = P(t),
/// P(t)C(t) = C(t)P(t) = C(t), ‖P(t)−p‖ ≤ tv, ‖C(t)−P(t)‖ ≤ tw, then
/// compares ‖C(1/n)ⁿ − e^{n(C(1/n)−P(1/n))}P(1/n)‖ with (w²/2n)e^{v+w}.
pub fn chernoff_approx_modified<FC, FP>(
    c_map: FC,
    p_map: FP,
    p: &CMatrix,
    v: f64,
    w: f64,
    n: u64,
) -> Result<InequalityReport>
where
    FC: Fn(f64) -> Result<CMatrix>,
    FP: Fn(f64) -> Result<CMatrix>,
{
    if n < 1 {
        return Err(ZenoError::InvalidInput("chernoff checks need n >= 1".into()));
    }
    let p_norm = operator_norm(p)?;
    if (p_norm - 1.0).abs() > 1e-9 {
        return Err(ZenoError::InvalidInput(format!(
            "hypothesis ‖p‖ = 1 fails: got {p_norm:.12}"
        )));
    }
    let dim = p.nrows();
    let t_top = 1.0 / n as f64;
    for t in geometric_grid(t_top) {
        let pt = p_map(t)?;
        let ct = c_map(t)?;
        let idem = operator_norm(&(&pt * &pt - &pt))?;
        if idem > 1e-8 {
            return Err(ZenoError::InvalidInput(format!(
                "hypothesis P(t)² = P(t) fails at t = {t}: defect {idem:.3e}"
            )));
        }
        let absorb_left = operator_norm(&(&pt * &ct - &ct))?;
        let absorb_right = operator_norm(&(&ct * &pt - &ct))?;
        if absorb_left > 1e-8 || absorb_right > 1e-8 {
            return Err(ZenoError::InvalidInput(format!(
                "hypothesis P(t)C(t) = C(t)P(t) = C(t) fails at t = {t}: defects {absorb_left:.3e}, {absorb_right:.3e}"
            )));
        }
        let p_dev = operator_norm(&(&pt - p))?;
        if p_dev > t * v + 1e-9 {
            return Err(ZenoError::InvalidInput(format!(
                "hypothesis ‖P(t)−p‖ ≤ tv fails at t = {t}: {p_dev:.3e} > {:.3e}",
                t * v
            )));
        }
        let c_dev = operator_norm(&(&ct - &pt))?;
        if c_dev > t * w + 1e-9 {
            return Err(ZenoError::InvalidInput(format!(
                "hypothesis ‖C(t)−P(t)‖ ≤ tw fails at t = {t}: {c_dev:.3e} > {:.3e}",
                t * w
            )));
        }
    }
    let cn = c_map(t_top)?;
    let pn = p_map(t_top)?;
    let semigroup = matrix_exp(&((&cn - &pn) * c(n as f64)))?;
    let lhs = operator_norm(&(matrix_power(&cn, n) - semigroup * &pn))?;
    let rhs = w * w / (2.0 * n as f64) * (v + w).exp();
    Ok(InequalityReport::new(lhs, rhs, format!("approx-modified n={n} dim={dim}")))
}

/// First-order product-formula bound for F with F(0) = 1, ‖F(s)‖ ≤ 1:
/// ‖F(t/n)ⁿ − e^{tL}‖ ≤ ‖n(F(t/n)−1) − tL‖ + (n/2)‖F(t/n)−1‖².
pub fn product_formula_bound<FF>(
    f_map: FF,
    l: &CMatrix,
    t: f64,
    n: u64,
) -> Result<InequalityReport>
where
    FF: Fn(f64) -> Result<CMatrix>,
{
    if n < 1 || t < 0.0 {
        return Err(ZenoError::InvalidInput("product formula needs n >= 1 and t >= 0".into()));
    }
    let dim = l.nrows();
    let f0 = f_map(0.0)?;
    if (f0 - identity(dim)).norm() > 1e-12 {
        return Err(ZenoError::InvalidInput("product formula needs F(0) = identity".into()));
    }
    for s in geometric_grid(t.max(1e-12)) {
        let norm = operator_norm(&f_map(s)?)?;
        if norm > 1.0 + CONTRACTION_TOL {
            return Err(ZenoError::InvalidInput(format!(
                "product formula needs ‖F(s)‖ ≤ 1, got {norm:.12} at s = {s}"
            )));
        }
    }
    let step = f_map(t / n as f64)?;
    let lhs = operator_norm(&(matrix_power(&step, n) - matrix_exp(&(l * c(t)))?))?;
    let deviation = (&step - identity(dim)) * c(n as f64) - l * c(t);
    let step_defect = operator_norm(&(&step - identity(dim)))?;
    let rhs = operator_norm(&deviation)? + n as f64 / 2.0 * step_defect * step_defect;
    Ok(InequalityReport::new(lhs, rhs, format!("product-formula t={t} n={n}")))
}

/// Trotter errors ‖(e^{L₁/n} e^{L₂/n})ⁿ − e^{L₁+L₂}‖ over an n grid.
pub fn trotter_rate(
    l1: &GeneratorSpec,
    l2: &GeneratorSpec,
    n_grid: &[u64],
) -> Result<ErrorSeries> {
    if l1.dim != l2.dim {
        return Err(ZenoError::InvalidInput(format!(
            "dimension mismatch: {} vs {}",
            l1.dim, l2.dim
        )));
    }
    if n_grid.is_empty() || n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ZenoError::InvalidInput("n grid must be non-empty and increasing".into()));
    }
    let target = matrix_exp(&(&l1.superoperator + &l2.superoperator))?;
    let mut entries = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let nf = n as f64;
        let step = matrix_exp(&(&l1.superoperator * c(1.0 / nf)))?
            * matrix_exp(&(&l2.superoperator * c(1.0 / nf)))?;
        let error = operator_norm(&(matrix_power(&step, n) - &target))?;
        entries.push(ErrorEntry { n, error, bound: None, epsilon_exceeded: false });
    }
    Ok(ErrorSeries {
        entries,
        t: 1.0,
        instance_label: "trotter".into(),
        truncated: false,
    })
}
