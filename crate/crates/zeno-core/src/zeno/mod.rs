//! The Zeno engine: alternating products (M e^{tL/n})ⁿ, their limits
//! Σⱼ λⱼⁿ e^{tPⱼLPⱼ}Pⱼ, per-n error series with paired bound evaluations,
//! the transition-counting combinatorics, the per-term proof-step
//! inequality checkers, and log-log rate fits.

pub mod bounds;
pub mod counting;
pub mod lemmas;
pub mod ratefit;
pub mod perturbed;

use crate::error::{Result, ZenoError};
use crate::linalg::{
    c, identity, matrix_exp, matrix_power, operator_norm, trace_norm, unvec_col, vec_col, CMatrix,
};
use crate::random::{complex_gaussian, haar_state};
use crate::semigroup::{evolve, GeneratorSpec};
use crate::spectral::{classify_power_convergence, PeripheralSpectrum, PERIPHERAL_TOL};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Contraction slack accepted on instance construction.
pub const INSTANCE_CONTRACTION_TOL: f64 = 1e-9;

/// Number of pure states drawn by the sampled 1→1 norm.
pub const SAMPLED_NORM_STATES: usize = 256;

/// Local-ascent refinement steps of the sampled 1→1 norm.
pub const SAMPLED_NORM_ASCENT_STEPS: usize = 50;

/// Fixed seed of the sampled 1→1 norm, so every evaluation sees the same
/// state sample and error series stay comparable across n.
const SAMPLED_NORM_SEED: u64 = 0x5eed_1701;

/// How operator-valued errors are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    /// Largest singular value of the (super)operator matrix.
    SpectralSuperop,
    /// max ‖Φ(ψψᴴ)‖₁ over sampled pure states with local-ascent refinement,
    /// a sampled stand-in for the 1→1 norm of superoperators.
    Hermitian1to1Sampled,
}

impl NormKind {
    /// Norm of an operator (or superoperator) matrix. For the sampled kind
    /// the matrix must act on a d²-dimensional vectorized space.
    pub fn matrix_norm(&self, m: &CMatrix) -> Result<f64> {
        match self {
            NormKind::SpectralSuperop => operator_norm(m),
            NormKind::Hermitian1to1Sampled => {
                let d2 = m.nrows();
                let d = (d2 as f64).sqrt().round() as usize;
                if d * d != d2 {
                    return Err(ZenoError::InvalidInput(format!(
                        "sampled 1->1 norm needs a superoperator on a square dimension, got {d2}"
                    )));
                }
                sampled_1to1_norm(m, d)
            }
        }
    }
}

/// Sampled 1→1 norm: the best of 256 Haar pure states, refined by 50
/// accepted-only random-ascent steps.
pub fn sampled_1to1_norm(s: &CMatrix, d: usize) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLED_NORM_SEED);
    let value = |psi: &crate::linalg::CVector| -> Result<f64> {
        let rho = CMatrix::from_fn(d, d, |i, j| psi[i] * psi[j].conj());
        let out = unvec_col(&(s * vec_col(&rho)), d);
        trace_norm(&out)
    };
    let mut best_psi = haar_state(d, &mut rng);
    let mut best = value(&best_psi)?;
    for _ in 1..SAMPLED_NORM_STATES {
        let psi = haar_state(d, &mut rng);
        let v = value(&psi)?;
        if v > best {
            best = v;
            best_psi = psi;
        }
    }
    for _ in 0..SAMPLED_NORM_ASCENT_STEPS {
        let mut cand = best_psi.clone();
        for entry in cand.iter_mut() {
            *entry += complex_gaussian(&mut rng) * c(0.05);
        }
        let norm = cand.norm();
        if norm == 0.0 {
            continue;
        }
        cand /= c(norm);
        let v = value(&cand)?;
        if v > best {
            best = v;
            best_psi = cand;
        }
    }
    Ok(best)
}

/// A contraction M paired with a certified semigroup generator, the
/// classified peripheral spectrum of M, a total evolution time, and the
/// measurement norm.
#[derive(Debug, Clone)]
pub struct ZenoInstance {
    pub m: CMatrix,
    pub generator: GeneratorSpec,
    pub spectrum: PeripheralSpectrum,
    pub t: f64,
    pub norm_kind: NormKind,
    pub label: String,
    /// Set by scenario builders that truncate an infinite-dimensional model.
    pub truncated: bool,
}

impl ZenoInstance {
    /// Build an instance by classifying M's peripheral spectrum in the
    /// spectral norm.
    pub fn classify(
        m: CMatrix,
        generator: GeneratorSpec,
        t: f64,
        norm_kind: NormKind,
        label: impl Into<String>,
    ) -> Result<Self> {
        let spectrum = classify_power_convergence(&m, PERIPHERAL_TOL, 64)?;
        Self::with_spectrum(m, generator, spectrum, t, norm_kind, label)
    }

    /// Build an instance with the classification's contraction check and c̃
    /// measurement taken in the instance's measurement norm. Required for
    /// channels that contract the trace norm but not the spectral norm.
    pub fn classify_in_norm(
        m: CMatrix,
        generator: GeneratorSpec,
        t: f64,
        norm_kind: NormKind,
        label: impl Into<String>,
    ) -> Result<Self> {
        let spectrum = crate::spectral::classify_power_convergence_with(
            &m,
            PERIPHERAL_TOL,
            64,
            &|a| norm_kind.matrix_norm(a),
        )?;
        Self::with_spectrum(m, generator, spectrum, t, norm_kind, label)
    }

    /// Build an instance from an externally constructed spectrum (used by
    /// scenario builders that know the peripheral structure analytically).
    pub fn with_spectrum(
        m: CMatrix,
        generator: GeneratorSpec,
        spectrum: PeripheralSpectrum,
        t: f64,
        norm_kind: NormKind,
        label: impl Into<String>,
    ) -> Result<Self> {
        if m.nrows() != generator.dim || m.ncols() != generator.dim {
            return Err(ZenoError::InvalidInput(format!(
                "contraction is {}x{} but the generator acts on dimension {}",
                m.nrows(),
                m.ncols(),
                generator.dim
            )));
        }
        if t < 0.0 || !t.is_finite() {
            return Err(ZenoError::InvalidInput(format!(
                "total time must be finite and >= 0, got {t}"
            )));
        }
        let inst = Self {
            m,
            generator,
            spectrum,
            t,
            norm_kind,
            label: label.into(),
            truncated: false,
        };
        let m_norm = inst.norm_kind.matrix_norm(&inst.m)?;
        if m_norm > 1.0 + INSTANCE_CONTRACTION_TOL {
            return Err(ZenoError::InvalidInput(format!(
                "M is not a contraction in the measurement norm: ‖M‖ = {m_norm:.12}"
            )));
        }
        // the spectrum must belong to this contraction: MPⱼ = λⱼPⱼ up to
        // the nilpotent tolerance
        for (lambda, p) in inst
            .spectrum
            .eigenvalues
            .iter()
            .zip(&inst.spectrum.projections)
        {
            let defect = operator_norm(&(&inst.m * p - p * *lambda))?;
            if defect > crate::spectral::NILPOTENT_TOL + 1e-8 {
                return Err(ZenoError::InvalidInput(format!(
                    "supplied spectrum is inconsistent with M: ‖MP − λP‖ = {defect:.3e} at λ = {lambda}"
                )));
            }
        }
        Ok(inst)
    }

    pub fn dim(&self) -> usize {
        self.generator.dim
    }
}

/// One measured point of an error series.
#[derive(Debug, Clone)]
pub struct ErrorEntry {
    pub n: u64,
    pub error: f64,
    pub bound: Option<f64>,
    /// The uniform bound is only guaranteed for t ≤ nε; rows beyond that
    /// are computed anyway and flagged.
    pub epsilon_exceeded: bool,
}

/// Per-n Zeno errors for one instance, optionally paired with bound values.
#[derive(Debug, Clone)]
pub struct ErrorSeries {
    pub entries: Vec<ErrorEntry>,
    pub t: f64,
    pub instance_label: String,
    pub truncated: bool,
}

/// Which explicit bound the series should carry alongside the errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    None,
    Thm1,
    Uniform,
}

/// The Zeno product (M e^{(t/n)L})ⁿ by binary-decomposition powering.
pub fn zeno_product(inst: &ZenoInstance, n: u64) -> Result<CMatrix> {
    if n < 1 {
        return Err(ZenoError::InvalidInput("zeno_product requires n >= 1".into()));
    }
    let step = &inst.m * evolve(&inst.generator, inst.t / n as f64)?;
    Ok(matrix_power(&step, n))
}

/// The Zeno limit Σⱼ λⱼⁿ e^{t PⱼLPⱼ} Pⱼ; reduces to e^{tPLP}P for a single
/// peripheral eigenvalue 1.
pub fn zeno_limit(inst: &ZenoInstance, n: u64) -> Result<CMatrix> {
    if inst.spectrum.is_empty() {
        return Err(ZenoError::InvalidInput(
            "zeno_limit needs a non-empty peripheral spectrum".into(),
        ));
    }
    let dim = inst.dim();
    let mut acc = CMatrix::zeros(dim, dim);
    for (lambda, p) in inst
        .spectrum
        .eigenvalues
        .iter()
        .zip(&inst.spectrum.projections)
    {
        let plp = p * &inst.generator.superoperator * p;
        let exp_plp = matrix_exp(&(plp * c(inst.t)))?;
        acc += exp_plp * p * lambda.powu(n as u32);
    }
    Ok(acc)
}

/// Measure ‖(M e^{(t/n)L})ⁿ − Σⱼ λⱼⁿ e^{tPⱼLPⱼ}Pⱼ‖ over an increasing n
/// grid in the instance's norm, optionally paired with an explicit bound.
pub fn zeno_error_series(
    inst: &ZenoInstance,
    n_grid: &[u64],
    with_bound: BoundKind,
) -> Result<ErrorSeries> {
    if n_grid.is_empty() {
        return Err(ZenoError::InvalidInput("empty n grid".into()));
    }
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ZenoError::InvalidInput("n grid must be strictly increasing".into()));
    }
    let bound_params = match with_bound {
        BoundKind::None => None,
        BoundKind::Thm1 | BoundKind::Uniform => Some(bounds::instance_bound_params(inst)?),
    };
    // validity radius of the uniform bound
    let epsilon = if with_bound == BoundKind::Uniform {
        perturbed::instance_epsilon(inst)?
    } else {
        f64::INFINITY
    };

    let mut entries = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let product = zeno_product(inst, n)?;
        let limit = zeno_limit(inst, n)?;
        let error = inst.norm_kind.matrix_norm(&(product - limit))?;
        if !error.is_finite() {
            return Err(ZenoError::NumericalFailure(format!("non-finite error at n = {n}")));
        }
        let bound = match (with_bound, &bound_params) {
            (BoundKind::Thm1, Some(p)) => Some(bounds::evaluate_bound_thm1(&p.with_n(n))?),
            (BoundKind::Uniform, Some(p)) => Some(bounds::evaluate_bound_uniform(&p.with_n(n))?),
            _ => None,
        };
        entries.push(ErrorEntry {
            n,
            error,
            bound,
            epsilon_exceeded: inst.t / n as f64 > epsilon,
        });
    }
    Ok(ErrorSeries {
        entries,
        t: inst.t,
        instance_label: inst.label.clone(),
        truncated: inst.truncated,
    })
}

/// Naive n-fold product, the oracle for [`zeno_product`]'s binary powering.
pub fn zeno_product_naive(inst: &ZenoInstance, n: u64) -> Result<CMatrix> {
    let step = &inst.m * evolve(&inst.generator, inst.t / n as f64)?;
    let mut acc = identity(inst.dim());
    for _ in 0..n {
        acc = &acc * &step;
    }
    Ok(acc)
}

pub use bounds::{
    evaluate_bound_thm1, evaluate_bound_uniform, zeno_condition_constants, BoundCertificate,
    BoundKindTag, BoundParams,
};
pub use counting::{counting_brute_force, counting_closed_form};
pub use lemmas::{check_lemma_54, check_lemma_55, check_lemma_56};
pub use ratefit::{rate_fit, RateFit};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, zeros};
    use crate::semigroup::{
        make_explicit_generator, make_explicit_generator_uncertified, make_hamiltonian_generator,
        Picture,
    };
    use num_complex::Complex64;

    pub(crate) fn optimality_instance(delta: f64, t: f64) -> ZenoInstance {
        // L = |1><2|, M = |1><1| + δ|3><3| on a 3-dimensional real space
        let mut l = zeros(3, 3);
        l[(0, 1)] = c(1.0);
        let m = diag(&[c(1.0), c(0.0), c(delta)]);
        let generator = make_explicit_generator_uncertified(&l).unwrap();
        ZenoInstance::classify(m, generator, t, NormKind::SpectralSuperop, "optimality").unwrap()
    }

    #[test]
    fn identity_instance_is_trivial() {
        let g = make_explicit_generator(&zeros(2, 2)).unwrap();
        let inst =
            ZenoInstance::classify(identity(2), g, 1.0, NormKind::SpectralSuperop, "id").unwrap();
        for n in [1u64, 3, 8] {
            assert!((zeno_product(&inst, n).unwrap() - identity(2)).norm() < 1e-14);
        }
    }

    #[test]
    fn optimality_product_closed_form() {
        // (M e^{(t/n)L})ⁿ = δⁿ|3><3| + |1><1| + (t/n)|1><2|
        let inst = optimality_instance(0.5, 1.0);
        for n in [1u64, 2, 7, 32] {
            let got = zeno_product(&inst, n).unwrap();
            let mut expect = diag(&[c(1.0), c(0.0), c(0.5f64.powi(n as i32))]);
            expect[(0, 1)] = c(1.0 / n as f64);
            assert!((got - expect).norm() < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn optimality_limit_is_projection() {
        // PLP = 0, so the limit is P itself
        let inst = optimality_instance(0.5, 1.0);
        let limit = zeno_limit(&inst, 5).unwrap();
        assert!((limit - diag(&[c(1.0), c(0.0), c(0.0)])).norm() < 1e-12);
    }

    #[test]
    fn identity_contraction_limit_is_full_semigroup() {
        // M = 1 means P = 1 and the Zeno limit is e^{tL}
        let h = crate::random::random_hermitian(3, &mut ChaCha8Rng::seed_from_u64(81));
        let g = make_hamiltonian_generator(&h, Picture::StateVector).unwrap();
        let inst =
            ZenoInstance::classify(identity(3), g.clone(), 0.7, NormKind::SpectralSuperop, "id")
                .unwrap();
        let limit = zeno_limit(&inst, 9).unwrap();
        assert!((limit - evolve(&g, 0.7).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn binary_powering_matches_naive_product() {
        let inst = optimality_instance(0.3, 2.0);
        for n in [1u64, 3, 13, 64] {
            let fast = zeno_product(&inst, n).unwrap();
            let slow = zeno_product_naive(&inst, n).unwrap();
            assert!((fast - slow).norm() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn optimality_error_is_exactly_max() {
        let inst = optimality_instance(0.5, 1.0);
        let grid: Vec<u64> = (1..=64).collect();
        let series = zeno_error_series(&inst, &grid, BoundKind::None).unwrap();
        for e in &series.entries {
            let expect = (1.0 / e.n as f64).max(0.5f64.powi(e.n as i32));
            assert!(
                (e.error - expect).abs() < 1e-12,
                "n = {}: {} vs {}",
                e.n,
                e.error,
                expect
            );
        }
    }

    #[test]
    fn error_series_rejects_bad_grids() {
        let inst = optimality_instance(0.5, 1.0);
        assert!(zeno_error_series(&inst, &[], BoundKind::None).is_err());
        assert!(zeno_error_series(&inst, &[4, 4], BoundKind::None).is_err());
        assert!(zeno_error_series(&inst, &[8, 4], BoundKind::None).is_err());
    }

    #[test]
    fn two_peripheral_limit_alternates_sign() {
        // explicit 4x4 block construction as the oracle
        let m = diag(&[c(1.0), c(-1.0), c(0.2), c(0.1)]);
        let mut l = zeros(4, 4);
        // couple inside the peripheral blocks only, and weakly outside
        l[(0, 0)] = Complex64::new(0.0, -0.8);
        l[(1, 1)] = Complex64::new(0.0, 0.6);
        l[(2, 3)] = c(0.3);
        l[(3, 2)] = c(-0.3);
        let g = make_explicit_generator(&l).unwrap();
        let inst = ZenoInstance::classify(m, g, 1.0, NormKind::SpectralSuperop, "pm1").unwrap();
        assert_eq!(inst.spectrum.len(), 2);
        for n in [2u64, 3] {
            let limit = zeno_limit(&inst, n).unwrap();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let p1 = diag(&[c(1.0), c(0.0), c(0.0), c(0.0)]);
            let p2 = diag(&[c(0.0), c(1.0), c(0.0), c(0.0)]);
            let block1 = matrix_exp(&(&p1 * &l * &p1)).unwrap() * &p1;
            let block2 = matrix_exp(&(&p2 * &l * &p2)).unwrap() * &p2 * c(sign);
            assert!((limit - (block1 + block2)).norm() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn sampled_norm_is_deterministic_and_normalized() {
        // the sampled 1->1 norm of the identity channel is 1 and the
        // evaluation is deterministic across calls
        let d = 3;
        let eye = identity(d * d);
        let a = sampled_1to1_norm(&eye, d).unwrap();
        let b = sampled_1to1_norm(&eye, d).unwrap();
        assert_eq!(a, b);
        assert!((a - 1.0).abs() < 1e-12);
    }
}
