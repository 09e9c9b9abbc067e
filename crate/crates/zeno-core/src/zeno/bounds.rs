//! Explicit convergence-bound evaluation: the bounded-generator bound with
//! spectral-gap term δⁿ, its closed-system specialization, and the
//! uniform-power-convergence variant with (2c̃/(δ̃−δ))δ̃ⁿ, together with the
//! instance constants (b, c_p, e^{b̃}) they consume.

use super::ZenoInstance;
use crate::error::{Result, ZenoError};
use crate::linalg::{identity, matrix_exp, CMatrix, c};
use crate::semigroup::evolve;

/// Sample count for the e^{b̃} = sup_{s∈[0,t]} ‖e^{sPLP}‖ estimate and for
/// the leakage-ratio certification of b.
pub const SUP_SAMPLES: usize = 64;

/// Which explicit bound a certificate refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKindTag {
    Thm1Explicit,
    ClosedSystem,
    UniformPower,
}

/// Parameters entering the explicit bounds.
#[derive(Debug, Clone, Copy)]
pub struct BoundParams {
    pub t: f64,
    /// ‖L‖ in the measurement norm.
    pub norm_l: f64,
    /// c_p = ‖1 − P‖.
    pub c_p: f64,
    /// e^{b̃} = sup_{s∈[0,t]} ‖e^{sPLP}‖, sampled.
    pub e_btilde: f64,
    pub delta: f64,
    /// Defaults to the midpoint (1+δ)/2 of the admissible interval (δ, 1).
    pub delta_tilde: Option<f64>,
    pub c_tilde: f64,
    pub b: f64,
    pub n: u64,
}

impl BoundParams {
    pub fn with_n(&self, n: u64) -> Self {
        Self { n, ..*self }
    }

    fn validate_common(&self) -> Result<()> {
        if self.n < 1 {
            return Err(ZenoError::InvalidInput("bound needs n >= 1".into()));
        }
        for (name, v) in [
            ("t", self.t),
            ("norm_l", self.norm_l),
            ("c_p", self.c_p),
            ("e_btilde", self.e_btilde),
            ("delta", self.delta),
            ("c_tilde", self.c_tilde),
            ("b", self.b),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(ZenoError::InvalidInput(format!(
                    "bound parameter {name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// An evaluated bound together with everything that went into it.
#[derive(Debug, Clone)]
pub struct BoundCertificate {
    pub kind: BoundKindTag,
    pub params: BoundParams,
    pub value: f64,
}

impl BoundCertificate {
    pub fn new(kind: BoundKindTag, params: BoundParams) -> Result<Self> {
        let value = match kind {
            BoundKindTag::Thm1Explicit | BoundKindTag::ClosedSystem => {
                evaluate_bound_thm1(&params)?
            }
            BoundKindTag::UniformPower => evaluate_bound_uniform(&params)?,
        };
        Ok(Self { kind, params, value })
    }
}

/// Explicit bound for contractions with ‖Mⁿ − P‖ ≤ δⁿ:
///
/// c_p·t‖L‖/n + ((c_p + (1+e^{b̃})(1+c_p²))/2)·t²‖L‖²/n + δⁿ
/// + (2δ/(1−δ))·e^{3t‖L‖c_p}/n.
pub fn evaluate_bound_thm1(p: &BoundParams) -> Result<f64> {
    p.validate_common()?;
    if p.delta >= 1.0 {
        return Err(ZenoError::InvalidInput(format!(
            "thm1 bound needs delta in [0,1), got {}",
            p.delta
        )));
    }
    let n = p.n as f64;
    let tl = p.t * p.norm_l;
    let linear = p.c_p * tl / n;
    let quadratic = (p.c_p + (1.0 + p.e_btilde) * (1.0 + p.c_p * p.c_p)) / 2.0 * tl * tl / n;
    let spectral = p.delta.powi(p.n as i32);
    let cross = 2.0 * p.delta / (1.0 - p.delta) * (3.0 * tl * p.c_p).exp() / n;
    Ok(linear + quadratic + spectral + cross)
}

/// Explicit bound for contractions with ‖Mⁿ − P‖ ≤ c̃δⁿ:
///
/// t·c_p‖L‖/n + ((c_p + (1+e^{b̃})(1+c_p²))/2)·t²‖L‖²/n
/// + (2c̃/(δ̃−δ))·δ̃ⁿ + (2δ̃/(1−δ̃))·e^{6t·c_p·c̃‖L‖/(δ̃−δ)}/n.
pub fn evaluate_bound_uniform(p: &BoundParams) -> Result<f64> {
    p.validate_common()?;
    let delta_tilde = p.delta_tilde.unwrap_or((1.0 + p.delta) / 2.0);
    if !(p.delta < delta_tilde && delta_tilde < 1.0) {
        return Err(ZenoError::InvalidInput(format!(
            "uniform bound needs delta < delta_tilde < 1, got delta = {}, delta_tilde = {delta_tilde}",
            p.delta
        )));
    }
    let n = p.n as f64;
    let tl = p.t * p.norm_l;
    let gap = delta_tilde - p.delta;
    let linear = p.c_p * tl / n;
    let quadratic = (p.c_p + (1.0 + p.e_btilde) * (1.0 + p.c_p * p.c_p)) / 2.0 * tl * tl / n;
    let spectral = 2.0 * p.c_tilde / gap * delta_tilde.powi(p.n as i32);
    let cross =
        2.0 * delta_tilde / (1.0 - delta_tilde) * (6.0 * tl * p.c_p * p.c_tilde / gap).exp() / n;
    Ok(linear + quadratic + spectral + cross)
}

/// Constants (b, c_p, e^{b̃}) of a Zeno instance.
///
/// b collects the algebraic leakage norms ‖PLP⊥‖ and ‖P⊥LP‖ for a single
/// peripheral eigenvalue (resp. ‖LP_Σ‖ and ‖ML‖ for several). For the
/// single-eigenvalue case it is additionally raised to the integral
/// envelopes ‖PL‖ and ‖P⊥L‖, which certify ‖Pe^{sL}P⊥‖ ≤ sb and
/// ‖P⊥e^{sL}P‖ ≤ sb globally for contraction semigroups via
/// Pe^{sL}P⊥ = ∫₀ˢ PLe^{uL}P⊥ du, and to the sampled supremum of the
/// finite-time ratios over s ∈ (0, t].
pub fn zeno_condition_constants(inst: &ZenoInstance) -> Result<(f64, f64, f64)> {
    if inst.spectrum.is_empty() {
        return Err(ZenoError::InvalidInput(
            "zeno constants need a non-empty peripheral spectrum".into(),
        ));
    }
    let dim = inst.dim();
    let eye = identity(dim);
    let l = &inst.generator.superoperator;
    let norm = |m: &CMatrix| inst.norm_kind.matrix_norm(m);

    let single = inst.spectrum.len() == 1;
    let p = if single {
        inst.spectrum.projections[0].clone()
    } else {
        inst.spectrum.p_sigma.clone()
    };
    let p_perp = &eye - &p;
    let c_p = norm(&p_perp)?;

    let mut b: f64 = 0.0;
    if single {
        b = b.max(norm(&(&p * l * &p_perp))?);
        b = b.max(norm(&(&p_perp * l * &p))?);
        // integral envelopes: ‖Pe^{sL}P⊥‖ ≤ s·min(‖LP⊥‖, c_p‖PL‖) and
        // ‖P⊥e^{sL}P‖ ≤ s·min(‖P⊥L‖, c_p‖LP‖) whenever ‖P‖ ≤ 1 and the
        // semigroup is a contraction
        b = b.max(norm(&(l * &p_perp))?.min(c_p * norm(&(&p * l))?));
        b = b.max(norm(&(&p_perp * l))?.min(c_p * norm(&(l * &p))?));
        if inst.t > 0.0 && l.norm() > 0.0 {
            for k in 1..=SUP_SAMPLES {
                let s = inst.t * k as f64 / SUP_SAMPLES as f64;
                let e_s = evolve(&inst.generator, s)?;
                b = b.max(norm(&(&p * &e_s * &p_perp))? / s);
                b = b.max(norm(&(&p_perp * &e_s * &p))? / s);
            }
        }
    } else {
        b = b.max(norm(&(l * &inst.spectrum.p_sigma))?);
        b = b.max(norm(&(&inst.m * l))?);
    }

    let plp = &p * l * &p;
    let mut e_btilde: f64 = 0.0;
    for k in 0..=SUP_SAMPLES {
        let s = inst.t * k as f64 / SUP_SAMPLES as f64;
        e_btilde = e_btilde.max(norm(&matrix_exp(&(&plp * c(s)))?)?);
    }
    Ok((b, c_p, e_btilde))
}

/// Assemble [`BoundParams`] from a classified instance (n filled per row).
pub fn instance_bound_params(inst: &ZenoInstance) -> Result<BoundParams> {
    let (b, c_p, e_btilde) = zeno_condition_constants(inst)?;
    let norm_l = inst.norm_kind.matrix_norm(&inst.generator.superoperator)?;
    Ok(BoundParams {
        t: inst.t,
        norm_l,
        c_p,
        e_btilde,
        delta: inst.spectrum.delta,
        delta_tilde: None,
        c_tilde: inst.spectrum.c_tilde,
        b,
        n: 1,
    })
}
