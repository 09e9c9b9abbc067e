//! Per-term inequality checkers for the three proof steps behind the
//! single-eigenvalue Zeno bound: the counting-based product comparison, the
//! modified-Chernoff step, and the Dunford–Segal-style generator
//! approximation. Each checker evaluates both sides at the instance's total
//! time absorbed into the generator (the bounds' t = 1 normal form).

use super::bounds::zeno_condition_constants;
use super::ZenoInstance;
use crate::chernoff::InequalityReport;
use crate::error::{Result, ZenoError};
use crate::linalg::{c, identity, matrix_exp, matrix_power, CMatrix, CVector};

/// Slack tolerance on c̃ ≤ 1 when validating the single-eigenvalue
/// hypothesis.
pub const C_TILDE_TOL: f64 = 1e-6;

/// Validate the single-peripheral-eigenvalue structure (J = 1, λ₁ = 1,
/// c̃ ≤ 1, ‖P‖ ≤ 1) and return the projection.
fn thm1_structure(inst: &ZenoInstance) -> Result<&CMatrix> {
    if inst.spectrum.len() != 1 {
        return Err(ZenoError::InvalidInput(format!(
            "lemma checkers need exactly one peripheral eigenvalue, found {}",
            inst.spectrum.len()
        )));
    }
    let lambda = inst.spectrum.eigenvalues[0];
    if (lambda - c(1.0)).norm() > 1e-8 {
        return Err(ZenoError::InvalidInput(format!(
            "lemma checkers need peripheral eigenvalue 1, found {lambda}"
        )));
    }
    if inst.spectrum.c_tilde > 1.0 + C_TILDE_TOL {
        return Err(ZenoError::InvalidInput(format!(
            "lemma checkers need c̃ ≤ 1, found {}",
            inst.spectrum.c_tilde
        )));
    }
    let p = &inst.spectrum.projections[0];
    let p_norm = inst.norm_kind.matrix_norm(p)?;
    if p_norm > 1.0 + 1e-8 {
        return Err(ZenoError::InvalidInput(format!(
            "lemma checkers need ‖P‖ ≤ 1, found {p_norm:.12}"
        )));
    }
    Ok(p)
}

/// Pieces shared by the three checkers, all with t absorbed into L.
struct LemmaPieces {
    p: CMatrix,
    /// t·L
    l_eff: CMatrix,
    /// t·b
    b_eff: f64,
    /// e^{b̃} = sup_{s∈[0,t]} ‖e^{sPLP}‖
    e_btilde: f64,
    /// e^{(t/n)L}
    step: CMatrix,
    /// (P e^{(t/n)L} P)ⁿ
    sandwiched_power: CMatrix,
    /// e^{nP(e^{(t/n)L}−1)P}
    chernoff_exp: CMatrix,
}

fn lemma_pieces(inst: &ZenoInstance, n: u64) -> Result<LemmaPieces> {
    if n < 1 {
        return Err(ZenoError::InvalidInput("lemma checkers need n >= 1".into()));
    }
    let p = thm1_structure(inst)?.clone();
    let (b, _c_p, e_btilde) = zeno_condition_constants(inst)?;
    let l_eff = &inst.generator.superoperator * c(inst.t);
    let b_eff = inst.t * b;
    let step = matrix_exp(&(&l_eff * c(1.0 / n as f64)))?;
    let sandwiched = &p * &step * &p;
    let sandwiched_power = matrix_power(&sandwiched, n);
    let dim = inst.dim();
    let generator_n = (&p * (&step - identity(dim)) * &p) * c(n as f64);
    let chernoff_exp = matrix_exp(&generator_n)?;
    Ok(LemmaPieces { p, l_eff, b_eff, e_btilde, step, sandwiched_power, chernoff_exp })
}

/// Counting-lemma step: ‖(Me^{L/n})ⁿ − (Pe^{L/n}P)ⁿ‖ against
/// δⁿ + b/n + (1/n)·b(2+b)(δ−δⁿ)/(1−δ)·e^{2b}, operator level.
pub fn check_lemma_54(inst: &ZenoInstance, n: u64) -> Result<InequalityReport> {
    let pieces = lemma_pieces(inst, n)?;
    let zeno_power = matrix_power(&(&inst.m * &pieces.step), n);
    let lhs = inst
        .norm_kind
        .matrix_norm(&(zeno_power - &pieces.sandwiched_power))?;
    let rhs = lemma_54_rhs(inst.spectrum.delta, pieces.b_eff, n);
    Ok(InequalityReport::new(lhs, rhs, format!("lemma-54 {} n={n}", inst.label)))
}

fn lemma_54_rhs(delta: f64, b: f64, n: u64) -> f64 {
    let nf = n as f64;
    let dn = delta.powi(n as i32);
    dn + b / nf + b * (2.0 + b) * (delta - dn) / (1.0 - delta) * (2.0 * b).exp() / nf
}

/// Vector-level variant of the counting-lemma left side.
pub fn lemma_54_vector_lhs(inst: &ZenoInstance, n: u64, x: &CVector) -> Result<f64> {
    let pieces = lemma_pieces(inst, n)?;
    let zeno_power = matrix_power(&(&inst.m * &pieces.step), n);
    Ok((zeno_power * x - &pieces.sandwiched_power * x).norm())
}

/// Modified-Chernoff step: ‖(Pe^{L/n}P)ⁿx − e^{nP(e^{L/n}−1)P}Px‖ against
/// (1/2n)(b²‖x‖ + b‖LPx‖ + ‖(LP)²x‖).
pub fn check_lemma_55(inst: &ZenoInstance, n: u64, x: &CVector) -> Result<InequalityReport> {
    let pieces = lemma_pieces(inst, n)?;
    let px = &pieces.p * x;
    let lhs = (&pieces.sandwiched_power * x - &pieces.chernoff_exp * &px).norm();
    let lp = &pieces.l_eff * &pieces.p;
    let lpx = &lp * x;
    let lp2x = &lp * &lp * x;
    let rhs = (pieces.b_eff.powi(2) * x.norm() + pieces.b_eff * lpx.norm() + lp2x.norm())
        / (2.0 * n as f64);
    Ok(InequalityReport::new(lhs, rhs, format!("lemma-55 {} n={n}", inst.label)))
}

/// Dunford–Segal-style step: ‖e^{nP(e^{L/n}−1)P}Px − e^{PLP}Px‖ against
/// (e^{b̃}/2n)(b²‖x‖ + ‖(LP)²x‖).
pub fn check_lemma_56(inst: &ZenoInstance, n: u64, x: &CVector) -> Result<InequalityReport> {
    let pieces = lemma_pieces(inst, n)?;
    let px = &pieces.p * x;
    let plp = &pieces.p * &pieces.l_eff * &pieces.p;
    let exp_plp = matrix_exp(&plp)?;
    let lhs = (&pieces.chernoff_exp * &px - exp_plp * &px).norm();
    let lp = &pieces.l_eff * &pieces.p;
    let lp2x = &lp * &lp * x;
    let rhs = pieces.e_btilde * (pieces.b_eff.powi(2) * x.norm() + lp2x.norm()) / (2.0 * n as f64);
    Ok(InequalityReport::new(lhs, rhs, format!("lemma-56 {} n={n}", inst.label)))
}

/// Full single-eigenvalue Zeno error on a vector,
/// ‖(Me^{(t/n)L})ⁿx − e^{tPLP}Px‖, for the telescoping comparison against
/// the three per-term left sides.
pub fn thm1_total_vector_error(inst: &ZenoInstance, n: u64, x: &CVector) -> Result<f64> {
    let pieces = lemma_pieces(inst, n)?;
    let zeno_power = matrix_power(&(&inst.m * &pieces.step), n);
    let plp = &pieces.p * &pieces.l_eff * &pieces.p;
    let limit = matrix_exp(&plp)? * &pieces.p;
    Ok((zeno_power * x - limit * x).norm())
}
