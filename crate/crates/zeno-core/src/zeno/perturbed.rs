//! Machinery behind the multi-eigenvalue Zeno limit: the perturbed
//! contraction family P_Σ M e^{sL} P_Σ = P_Σ M + sB(s), its per-eigenvalue
//! perturbed spectral projections Pⱼ(s) and Chernoff contractions Cⱼ(s),
//! and the semicontinuity radius ε = min{ε₁, ε₂} inside which the
//! separation of the perturbed spectrum is guaranteed.

use super::ZenoInstance;
use crate::error::{Result, ZenoError};
use crate::linalg::{c, identity, operator_norm, CMatrix};
use crate::semigroup::evolve;
use crate::spectral::{perturbed_projection, semicontinuity_epsilon, spectral_projection, Contour};

/// A(s) = P_Σ M e^{sL} P_Σ, the perturbed peripheral contraction.
pub fn perturbed_contraction(inst: &ZenoInstance, s: f64) -> Result<CMatrix> {
    let p_sigma = &inst.spectrum.p_sigma;
    Ok(p_sigma * &inst.m * evolve(&inst.generator, s)? * p_sigma)
}

/// B(s) with A + sB(s) = A(s); at s = 0 this is P_Σ M L P_Σ.
pub fn perturbation_direction(inst: &ZenoInstance, s: f64) -> Result<CMatrix> {
    let p_sigma = &inst.spectrum.p_sigma;
    if s == 0.0 {
        Ok(p_sigma * &inst.m * &inst.generator.superoperator * p_sigma)
    } else {
        let a0 = p_sigma * &inst.m * p_sigma;
        Ok((perturbed_contraction(inst, s)? - a0) * c(1.0 / s))
    }
}

/// The circle Γⱼ around the j-th peripheral eigenvalue at the
/// classification's contour radius.
pub fn eigenvalue_contour(inst: &ZenoInstance, j: usize) -> Result<Contour> {
    let lambda = *inst
        .spectrum
        .eigenvalues
        .get(j)
        .ok_or_else(|| ZenoError::InvalidInput(format!("no peripheral eigenvalue {j}")))?;
    Contour::new(lambda, inst.spectrum.contour_radius, 32)
}

/// Perturbed spectral projection Pⱼ(s) = (1/2πi)∮_{Γⱼ} R(z, A(s)) dz.
pub fn perturbed_eigenprojection(inst: &ZenoInstance, j: usize, s: f64) -> Result<CMatrix> {
    let contour = eigenvalue_contour(inst, j)?;
    let p_sigma = &inst.spectrum.p_sigma;
    let a0 = p_sigma * &inst.m * p_sigma;
    if s == 0.0 {
        return spectral_projection(&a0, &contour);
    }
    let b_s = perturbation_direction(inst, s)?;
    perturbed_projection(&a0, |_| b_s.clone(), s, &contour)
}

/// Chernoff contraction Cⱼ(s) = λ̄ⱼ Pⱼ(s) A(s) Pⱼ(s); it satisfies
/// Pⱼ(s)Cⱼ(s) = Cⱼ(s)Pⱼ(s) = Cⱼ(s) by construction.
pub fn chernoff_contraction(inst: &ZenoInstance, j: usize, s: f64) -> Result<CMatrix> {
    let lambda = inst.spectrum.eigenvalues[j];
    let p_s = perturbed_eigenprojection(inst, j, s)?;
    let a_s = perturbed_contraction(inst, s)?;
    Ok(&p_s * a_s * &p_s * lambda.conj())
}

/// Measured Lipschitz rates (v, w) of the perturbed family on a sampled
/// grid: v bounds ‖Pⱼ(s) − Pⱼ‖/s and w bounds ‖Cⱼ(s) − Pⱼ(s)‖/s.
pub fn chernoff_rates(inst: &ZenoInstance, j: usize, s_grid: &[f64]) -> Result<(f64, f64)> {
    let p0 = &inst.spectrum.projections[j];
    let mut v: f64 = 0.0;
    let mut w: f64 = 0.0;
    for &s in s_grid {
        if s <= 0.0 {
            continue;
        }
        let p_s = perturbed_eigenprojection(inst, j, s)?;
        let c_s = chernoff_contraction(inst, j, s)?;
        v = v.max(operator_norm(&(&p_s - p0))? / s);
        w = w.max(operator_norm(&(c_s - p_s))? / s);
    }
    Ok((v, w))
}

/// Semicontinuity radius ε = min{ε₁, ε₂}: ε₁ keeps σ(M^⊥ e^{sL}) inside the
/// δ̃-circle, ε₂ keeps each perturbed peripheral cluster inside its Γⱼ.
///
/// The Lipschitz rates are the certified integral envelopes
/// ‖M^⊥e^{sL} − M^⊥‖ ≤ s‖M^⊥L‖ and ‖B(s)‖ ≤ ‖P_ΣML‖·‖P_Σ‖, valid for
/// every contraction semigroup.
pub fn instance_epsilon(inst: &ZenoInstance) -> Result<f64> {
    if inst.spectrum.is_empty() {
        return Err(ZenoError::InvalidInput("epsilon needs a peripheral spectrum".into()));
    }
    let dim = inst.dim();
    let l = &inst.generator.superoperator;
    let delta_tilde = (1.0 + inst.spectrum.delta) / 2.0;

    // ε₁: γ is the δ̃-circle around the interior spectrum of M^⊥ = M P_Σ^⊥
    let m_perp = &inst.m * (identity(dim) - &inst.spectrum.p_sigma);
    let gamma = Contour::new(c(0.0), delta_tilde, 32)?;
    let lip_perp = operator_norm(&(&m_perp * l))?;
    let eps1 = semicontinuity_epsilon(&m_perp, &gamma, lip_perp)?.epsilon;

    // ε₂: each Γⱼ under the perturbation A(s) = A + sB(s)
    let p_sigma = &inst.spectrum.p_sigma;
    let a0 = p_sigma * &inst.m * p_sigma;
    let lip_b = operator_norm(&(p_sigma * &inst.m * l))? * operator_norm(p_sigma)?.max(1.0);
    let mut eps2 = f64::INFINITY;
    for j in 0..inst.spectrum.len() {
        let contour = eigenvalue_contour(inst, j)?;
        eps2 = eps2.min(semicontinuity_epsilon(&a0, &contour, lip_b)?.epsilon);
    }
    Ok(eps1.min(eps2))
}
