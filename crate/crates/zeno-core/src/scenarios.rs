//! Named, reproducible instance families: the rank-one optimality example,
//! generalized depolarizing channels, Haar-random Stinespring channels,
//! relative-entropy (SDPI) contraction certificates, a truncated
//! harmonic-oscillator model, and the seeded random ensembles the
//! verification sweeps draw from.

use crate::error::{Result, ZenoError};
use crate::linalg::{
    c, dagger, diag, identity, im, matrix_power, operator_norm, trace_norm, vec_col, CMatrix,
};
use crate::random::{
    complex_gaussian, gaussian_matrix, haar_isometry, haar_state, haar_unitary, random_density,
    random_hermitian,
};
use crate::semigroup::{
    apply_superop, commutator_superop, make_explicit_generator,
    make_explicit_generator_uncertified, trace_preservation_defect, GeneratorSpec,
};
use crate::spectral::PeripheralSpectrum;
use crate::zeno::{sampled_1to1_norm, NormKind, ZenoInstance};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Eigenvalue floor applied before logarithms in relative entropies.
pub const ENTROPY_EIGENVALUE_FLOOR: f64 = 1e-14;

/// A named scenario with its parameter map and seed; the same triple always
/// builds the identical instance.
#[derive(Debug, Clone)]
pub struct ScenarioSpec {
    pub name: String,
    pub parameters: BTreeMap<String, f64>,
    pub seed: u64,
}

impl ScenarioSpec {
    pub fn new(name: impl Into<String>, parameters: BTreeMap<String, f64>, seed: u64) -> Self {
        Self { name: name.into(), parameters, seed }
    }

    fn param(&self, key: &str) -> Option<f64> {
        self.parameters.get(key).copied()
    }

    fn param_or(&self, key: &str, default: f64) -> f64 {
        self.param(key).unwrap_or(default)
    }

    /// Build the instance at total time `t`.
    pub fn build(&self, t: f64) -> Result<ZenoInstance> {
        match self.name.as_str() {
            "optimality" => {
                let delta = self.param("delta").ok_or_else(|| {
                    ZenoError::InvalidInput("optimality scenario needs `delta`".into())
                })?;
                build_optimality_example(delta, t)
            }
            "depolarizing" => {
                let dim = self.param_or("dim", 3.0) as usize;
                let p = self.param("p").ok_or_else(|| {
                    ZenoError::InvalidInput("depolarizing scenario needs `p`".into())
                })?;
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                let sigma = random_density(dim, &mut rng);
                let h = random_hermitian(dim, &mut rng);
                let g = make_explicit_generator(&commutator_superop(&h))?;
                build_depolarizing(p, &sigma, g, t)
            }
            "random-cptp" => {
                let dim = self.param_or("dim", 3.0) as usize;
                let env_dim = self.param_or("env_dim", 2.0) as usize;
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(0x9e37));
                let h = random_hermitian(dim, &mut rng);
                let g = make_explicit_generator(&commutator_superop(&h))?;
                build_random_cptp(dim, env_dim, self.seed, g, t)
            }
            "truncated-oscillator" => {
                let truncation = self.param_or("truncation", 16.0) as usize;
                let p = self.param_or("p", 0.75);
                build_truncated_oscillator(truncation, &fock_sigma(truncation)?, p, t)
            }
            "two-peripheral" => {
                let dim = self.param_or("dim", 4.0) as usize;
                let delta = self.param_or("delta", 0.4);
                build_two_peripheral(dim, delta, self.seed, t)
            }
            "closed-system" => {
                let dim = self.param_or("dim", 4.0) as usize;
                let rank = self.param_or("rank", (dim / 2) as f64) as usize;
                build_hermitian_projector_zeno(dim, rank, self.seed, t)
            }
            "thm1-random" => {
                let dim = self.param_or("dim", 5.0) as usize;
                let rank = self.param_or("rank", 2.0) as usize;
                let delta = self.param_or("delta", 0.5);
                build_thm1_random(dim, rank, delta, self.seed, t)
            }
            "uniform-random" => {
                let dim = self.param_or("dim", 5.0) as usize;
                let rank = self.param_or("rank", 2.0) as usize;
                let delta = self.param_or("delta", 0.5);
                build_uniform_random(dim, rank, delta, self.seed, t)
            }
            other => Err(ZenoError::InvalidInput(format!("unknown scenario `{other}`"))),
        }
    }
}

/// The 3-dimensional rank-one instance whose Zeno error is exactly
/// max{t/n, δⁿ}: L = |1⟩⟨2|, M = |1⟩⟨1| + δ|3⟩⟨3|.
pub fn build_optimality_example(delta: f64, t: f64) -> Result<ZenoInstance> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(ZenoError::InvalidInput(format!(
            "optimality example needs delta in (0,1), got {delta}"
        )));
    }
    let mut l = CMatrix::zeros(3, 3);
    l[(0, 1)] = c(1.0);
    let m = diag(&[c(1.0), c(0.0), c(delta)]);
    let p = diag(&[c(1.0), c(0.0), c(0.0)]);

    // structural identities the closed form relies on
    debug_assert!((&l * &l).norm() == 0.0);
    debug_assert!((&l * &p).norm() == 0.0);
    debug_assert!((&l * &m).norm() == 0.0);

    // the nilpotent L is not a contraction generator; the closed form does
    // not depend on that hypothesis
    let generator = make_explicit_generator_uncertified(&l)?;
    let inst = ZenoInstance::classify(m.clone(), generator, t, NormKind::SpectralSuperop, "optimality")?;
    // ‖Mⁿ − P‖ = δⁿ exactly for this instance
    for n in 1..=16u64 {
        let defect = operator_norm(&(matrix_power(&m, n) - &p))?;
        if (defect - delta.powi(n as i32)).abs() > 1e-12 {
            return Err(ZenoError::NumericalFailure(format!(
                "optimality self-check failed at n = {n}: ‖Mⁿ−P‖ = {defect}"
            )));
        }
    }
    Ok(inst)
}

/// Superoperator of the state-replacement projection ρ ↦ tr(ρ)σ.
pub fn state_replacement_superop(sigma: &CMatrix) -> CMatrix {
    let d = sigma.nrows();
    let vec_sigma = vec_col(sigma);
    let vec_id = vec_col(&identity(d));
    let mut p = CMatrix::zeros(d * d, d * d);
    for i in 0..d * d {
        for j in 0..d * d {
            p[(i, j)] = vec_sigma[i] * vec_id[j].conj();
        }
    }
    p
}

/// Superoperator of the generalized depolarizing channel
/// ρ ↦ (1−p)ρ + p·tr(ρ)σ.
pub fn depolarizing_superop(p: f64, sigma: &CMatrix) -> CMatrix {
    let d = sigma.nrows();
    identity(d * d) * c(1.0 - p) + state_replacement_superop(sigma) * c(p)
}

fn validate_density(sigma: &CMatrix) -> Result<()> {
    if !sigma.is_square() || sigma.nrows() == 0 {
        return Err(ZenoError::InvalidInput("state must be square and non-empty".into()));
    }
    if (sigma - dagger(sigma)).norm() > 1e-10 {
        return Err(ZenoError::InvalidInput("state is not Hermitian".into()));
    }
    let tr: Complex64 = sigma.diagonal().iter().sum();
    if (tr - c(1.0)).norm() > 1e-10 {
        return Err(ZenoError::InvalidInput(format!("state trace is {tr}, expected 1")));
    }
    let min_eig = sigma.clone().symmetric_eigen().eigenvalues.min();
    if min_eig < -1e-10 {
        return Err(ZenoError::InvalidInput(format!(
            "state has negative eigenvalue {min_eig:.3e}"
        )));
    }
    Ok(())
}

/// Depolarizing-channel Zeno instance with fixed point σ over the supplied
/// semigroup, measured in the sampled 1→1 norm. The peripheral structure
/// (λ = 1, P(ρ) = tr(ρ)σ, δ = 2(1−p), c̃ = 1) is the analytic one; the
/// build verifies ‖Mⁿ − P‖ ≤ (2(1−p))ⁿ on sampled powers.
pub fn build_depolarizing(
    p: f64,
    sigma: &CMatrix,
    generator: GeneratorSpec,
    t: f64,
) -> Result<ZenoInstance> {
    if !(p > 0.5 && p < 1.0) {
        return Err(ZenoError::InvalidInput(format!(
            "depolarizing parameter must lie in (1/2, 1), got {p}"
        )));
    }
    validate_density(sigma)?;
    let d = sigma.nrows();
    if generator.dim != d * d {
        return Err(ZenoError::InvalidInput(format!(
            "generator dimension {} does not match superoperator dimension {}",
            generator.dim,
            d * d
        )));
    }
    let m = depolarizing_superop(p, sigma);
    let proj = state_replacement_superop(sigma);
    let delta = 2.0 * (1.0 - p);

    // Mⁿ − P = (1−p)ⁿ(id − P) exactly; verify the factorization and the
    // sampled 1→1 power bound
    let id_minus_p = identity(d * d) - &proj;
    let mut mn = identity(d * d);
    for n in 1..=8u64 {
        mn = &mn * &m;
        let factor = (1.0 - p).powi(n as i32);
        let defect = operator_norm(&(&mn - &proj - &id_minus_p * c(factor)))?;
        if defect > 1e-10 {
            return Err(ZenoError::NumericalFailure(format!(
                "depolarizing factorization defect {defect:.3e} at n = {n}"
            )));
        }
        let sampled = sampled_1to1_norm(&(&mn - &proj), d)?;
        if sampled > delta.powi(n as i32) + 1e-10 {
            return Err(ZenoError::NumericalFailure(format!(
                "sampled power bound fails at n = {n}: {sampled} > {}",
                delta.powi(n as i32)
            )));
        }
    }

    let spectrum = PeripheralSpectrum {
        eigenvalues: vec![c(1.0)],
        projections: vec![proj.clone()],
        p_sigma: proj,
        delta,
        c_tilde: 1.0,
        nilpotent_norms: vec![0.0],
        contour_radius: (1.0 - delta) / 2.0,
    };
    ZenoInstance::with_spectrum(m, generator, spectrum, t, NormKind::Hermitian1to1Sampled, "depolarizing")
}

/// Kraus operators of a Haar-random Stinespring channel.
pub fn haar_cptp_kraus<R: Rng + ?Sized>(dim: usize, env_dim: usize, rng: &mut R) -> Vec<CMatrix> {
    let v = haar_isometry(dim * env_dim, dim, rng);
    (0..env_dim)
        .map(|k| CMatrix::from_fn(dim, dim, |i, j| v[(i * env_dim + k, j)]))
        .collect()
}

/// Superoperator of a channel from its Kraus operators (column stacking).
pub fn kraus_to_superop(kraus: &[CMatrix]) -> CMatrix {
    let d = kraus[0].nrows();
    let mut s = CMatrix::zeros(d * d, d * d);
    for k in kraus {
        s += k.conjugate().kronecker(k);
    }
    s
}

/// Seeded Haar-random CPTP superoperator.
pub fn random_cptp_superop(dim: usize, env_dim: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    kraus_to_superop(&haar_cptp_kraus(dim, env_dim, &mut rng))
}

/// Haar-random Stinespring channel instance. The build asserts eigenvalue 1
/// is present and every peripheral quasinilpotent is ≤ 1e-8, and measures
/// the power-convergence constant in the sampled 1→1 norm.
pub fn build_random_cptp(
    dim: usize,
    env_dim: usize,
    seed: u64,
    generator: GeneratorSpec,
    t: f64,
) -> Result<ZenoInstance> {
    if dim < 2 || env_dim < 1 {
        return Err(ZenoError::InvalidInput("random channel needs dim >= 2, env_dim >= 1".into()));
    }
    let m = random_cptp_superop(dim, env_dim, seed);
    if generator.dim != dim * dim {
        return Err(ZenoError::InvalidInput(format!(
            "generator dimension {} does not match superoperator dimension {}",
            generator.dim,
            dim * dim
        )));
    }
    let tp = trace_preservation_defect(&m, dim);
    if tp > 1e-10 {
        return Err(ZenoError::NumericalFailure(format!(
            "random channel is not trace preserving (defect {tp:.3e})"
        )));
    }
    let inst = ZenoInstance::classify_in_norm(
        m,
        generator,
        t,
        NormKind::Hermitian1to1Sampled,
        format!("random-cptp seed={seed}"),
    )?;
    if !inst
        .spectrum
        .eigenvalues
        .iter()
        .any(|l| (l - c(1.0)).norm() < 1e-6)
    {
        return Err(ZenoError::NumericalFailure(
            "random channel classification found no eigenvalue 1".into(),
        ));
    }
    if inst.spectrum.nilpotent_norms.iter().any(|&n| n > 1e-8) {
        return Err(ZenoError::NumericalFailure(
            "random channel has a peripheral nilpotent above 1e-8".into(),
        ));
    }
    Ok(inst)
}

/// Quantum relative entropy D(ρ‖σ) = tr[ρ(log ρ − log σ)] with spectra
/// floored at [`ENTROPY_EIGENVALUE_FLOOR`]; `None` if supp ρ ⊄ supp σ.
pub fn relative_entropy(rho: &CMatrix, sigma: &CMatrix) -> Option<f64> {
    let er = rho.clone().symmetric_eigen();
    let es = sigma.clone().symmetric_eigen();
    // support violation: ρ has weight where σ (numerically) vanishes
    for (j, &s_eig) in es.eigenvalues.iter().enumerate() {
        if s_eig <= 1e-12 {
            let v = es.eigenvectors.column(j);
            let overlap = (rho * v).norm();
            if overlap > 1e-10 {
                return None;
            }
        }
    }
    let log_mat = |eigvals: &nalgebra::DVector<f64>, eigvecs: &CMatrix| -> CMatrix {
        let logs: Vec<Complex64> = eigvals
            .iter()
            .map(|&e| c(e.max(ENTROPY_EIGENVALUE_FLOOR).ln()))
            .collect();
        eigvecs * diag(&logs) * dagger(eigvecs)
    };
    let log_rho = log_mat(&er.eigenvalues, &er.eigenvectors);
    let log_sigma = log_mat(&es.eigenvalues, &es.eigenvectors);
    let diff = rho * (log_rho - log_sigma);
    let tr: Complex64 = diff.diagonal().iter().sum();
    Some(tr.re)
}

/// Estimate a strong-data-processing contraction certificate by sampling:
/// δ̂ maximizes D(M(ρ)‖M∘P(ρ))/D(ρ‖P(ρ)), c̃ = √2·max D(ρ‖P(ρ))^{1/2};
/// returns (√δ̂, c̃) so that c̃·(√δ̂)ⁿ bounds ‖Mⁿ − Mⁿ∘P‖ on states.
pub fn build_sdpi_certificate(
    m: &CMatrix,
    p: &CMatrix,
    states: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let d2 = m.nrows();
    let d = (d2 as f64).sqrt().round() as usize;
    if d * d != d2 || p.nrows() != d2 {
        return Err(ZenoError::InvalidInput("sdpi needs superoperators on a d² space".into()));
    }
    let comm = operator_norm(&(m * p - p * m))?;
    if comm > 1e-9 {
        return Err(ZenoError::InvalidInput(format!(
            "sdpi needs MP = PM, commutator norm {comm:.3e}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut delta_hat: f64 = 0.0;
    let mut max_d: f64 = 0.0;
    let mut used = 0usize;
    let pure_states = states;
    let mixed_states = states / 4;
    for k in 0..(pure_states + mixed_states) {
        let rho = if k < pure_states {
            let psi = haar_state(d, &mut rng);
            CMatrix::from_fn(d, d, |i, j| psi[i] * psi[j].conj())
        } else {
            random_density(d, &mut rng)
        };
        let p_rho = apply_superop(p, &rho);
        let m_rho = apply_superop(m, &rho);
        let mp_rho = apply_superop(m, &p_rho);
        let denom = match relative_entropy(&rho, &p_rho) {
            Some(v) => v,
            None => continue,
        };
        if denom <= 1e-12 {
            continue;
        }
        let numer = match relative_entropy(&m_rho, &mp_rho) {
            Some(v) => v.max(0.0),
            None => continue,
        };
        used += 1;
        delta_hat = delta_hat.max(numer / denom);
        max_d = max_d.max(denom);
    }
    if used == 0 {
        return Err(ZenoError::EstimationFailure(
            "every sampled state was discarded (support violations or zero denominators)".into(),
        ));
    }
    Ok((delta_hat.sqrt(), (2.0 * max_d).sqrt()))
}

/// The paper-fixed reference state on the lowest three Fock levels,
/// embedded into `truncation` dimensions.
pub fn fock_sigma(truncation: usize) -> Result<CMatrix> {
    if truncation < 3 {
        return Err(ZenoError::InvalidInput("fock sigma needs at least 3 levels".into()));
    }
    let mut sigma = CMatrix::zeros(truncation, truncation);
    for k in 0..3 {
        sigma[(k, k)] = c(1.0 / 3.0);
    }
    sigma[(0, 1)] = c(0.1);
    sigma[(1, 0)] = c(0.1);
    Ok(sigma)
}

/// Truncated harmonic-oscillator instance: H = diag(j + 1/2) on the first
/// `truncation` Fock levels, L = −i[H,·], M the depolarizing channel toward
/// σ. The instance is flagged `truncated`; the build checks the sampled
/// leakage identities ‖Pe^{tL}(1−P)‖ = 0 and ‖(1−P)e^{tL}P‖ ≤ t‖L(σ)‖₁.
pub fn build_truncated_oscillator(
    truncation: usize,
    sigma: &CMatrix,
    p: f64,
    t: f64,
) -> Result<ZenoInstance> {
    if truncation < 3 {
        return Err(ZenoError::InvalidInput("oscillator truncation must be >= 3".into()));
    }
    if sigma.nrows() > truncation {
        return Err(ZenoError::InvalidInput(format!(
            "state support {} exceeds the truncation {truncation}",
            sigma.nrows()
        )));
    }
    // embed σ if it was given on fewer levels
    let mut sigma_full = CMatrix::zeros(truncation, truncation);
    for i in 0..sigma.nrows() {
        for j in 0..sigma.ncols() {
            sigma_full[(i, j)] = sigma[(i, j)];
        }
    }
    validate_density(&sigma_full)?;

    let h = CMatrix::from_fn(truncation, truncation, |i, j| {
        if i == j {
            c(i as f64 + 0.5)
        } else {
            c(0.0)
        }
    });
    let l = commutator_superop(&h);
    let generator = make_explicit_generator(&l)?;

    let mut inst = build_depolarizing(p, &sigma_full, generator, t)?;
    inst.label = format!("truncated-oscillator d={truncation} p={p}");
    inst.truncated = true;

    // leakage checks of the analytic projection structure
    let proj = &inst.spectrum.p_sigma;
    let complement = identity(truncation * truncation) - proj;
    let sample_t = if t > 0.0 { t } else { 1.0 };
    let e_t = crate::semigroup::evolve(&inst.generator, sample_t)?;
    let upper = sampled_1to1_norm(&(proj * &e_t * &complement), truncation)?;
    if upper > 1e-10 {
        return Err(ZenoError::NumericalFailure(format!(
            "oscillator leakage ‖Pe^(tL)(1−P)‖ = {upper:.3e} should vanish"
        )));
    }
    let lower = sampled_1to1_norm(&(&complement * &e_t * proj), truncation)?;
    let l_sigma = apply_superop(&inst.generator.superoperator, &sigma_full);
    let cap = sample_t * trace_norm(&l_sigma)?;
    if lower > cap + 1e-9 {
        return Err(ZenoError::NumericalFailure(format!(
            "oscillator leakage ‖(1−P)e^(tL)P‖ = {lower:.3e} exceeds t‖L(σ)‖₁ = {cap:.3e}"
        )));
    }
    Ok(inst)
}

/// Random dissipative spectral-contraction generator −iH − γ·GᴴG.
pub fn random_contraction_generator<R: Rng + ?Sized>(
    dim: usize,
    dissipation: f64,
    rng: &mut R,
) -> Result<GeneratorSpec> {
    let h = random_hermitian(dim, rng);
    let mut l = &h * (-im());
    if dissipation > 0.0 {
        let g = gaussian_matrix(dim, dim, rng);
        let s = dagger(&g) * &g;
        let s_norm = operator_norm(&s)?;
        l -= s * c(dissipation / s_norm);
    }
    make_explicit_generator(&l)
}

/// Closed-system instance: M a Hermitian projector of the given rank and
/// L = −iH for a random Hermitian H, both conjugated by nothing (the
/// projector is already Haar-random). The classified gap is numerically
/// zero, so the bound reduces to the closed-system form.
pub fn build_hermitian_projector_zeno(
    dim: usize,
    rank: usize,
    seed: u64,
    t: f64,
) -> Result<ZenoInstance> {
    if rank == 0 || rank >= dim {
        return Err(ZenoError::InvalidInput(format!(
            "projector rank must lie in 1..dim, got {rank} of {dim}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = crate::random::random_projector(dim, rank, &mut rng);
    let h = random_hermitian(dim, &mut rng);
    let generator = make_explicit_generator(&(&h * (-im())))?;
    ZenoInstance::classify(
        m,
        generator,
        t,
        NormKind::SpectralSuperop,
        format!("closed-system d={dim} r={rank} seed={seed}"),
    )
}

/// Block contraction M = U(1_rank ⊕ D)Uᴴ with D normal of spectral radius
/// exactly δ, so ‖Mⁿ − P‖ = δⁿ (the c̃ = 1 hypothesis holds with equality).
fn block_contraction<R: Rng + ?Sized>(
    dim: usize,
    rank: usize,
    delta: f64,
    strict_upper: f64,
    rng: &mut R,
) -> (CMatrix, CMatrix) {
    let rest = dim - rank;
    let mut entries: Vec<Complex64> = Vec::with_capacity(dim);
    for _ in 0..rank {
        entries.push(c(1.0));
    }
    for k in 0..rest {
        let modulus = if k == 0 { delta } else { rng.gen_range(0.1..=1.0) * delta };
        let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        entries.push(Complex64::from_polar(modulus, phase));
    }
    let mut core = diag(&entries);
    if strict_upper > 0.0 {
        // break normality inside the decaying block only
        for i in rank..dim {
            for j in (i + 1)..dim {
                core[(i, j)] = complex_gaussian(rng) * c(strict_upper);
            }
        }
    }
    let u = haar_unitary(dim, rng);
    let m = &u * &core * dagger(&u);
    let mut indicator = CMatrix::zeros(dim, dim);
    for k in 0..rank {
        indicator[(k, k)] = c(1.0);
    }
    let p = &u * indicator * dagger(&u);
    (m, p)
}

/// Instance satisfying ‖Mⁿ − P‖ ≤ δⁿ exactly (c̃ = 1): normal decaying
/// block of spectral radius δ behind a Haar unitary, dissipative generator.
pub fn build_thm1_random(
    dim: usize,
    rank: usize,
    delta: f64,
    seed: u64,
    t: f64,
) -> Result<ZenoInstance> {
    if rank == 0 || rank >= dim {
        return Err(ZenoError::InvalidInput("rank must lie in 1..dim".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(ZenoError::InvalidInput("delta must lie in (0,1)".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (m, p) = block_contraction(dim, rank, delta, 0.0, &mut rng);
    let generator = random_contraction_generator(dim, rng.gen_range(0.0..0.5), &mut rng)?;
    let inst = ZenoInstance::classify(
        m.clone(),
        generator,
        t,
        NormKind::SpectralSuperop,
        format!("thm1-random d={dim} r={rank} δ={delta} seed={seed}"),
    )?;
    // certify the c̃ = 1 hypothesis on a power sweep
    for n in 1..=64u64 {
        let defect = operator_norm(&(matrix_power(&m, n) - &p))?;
        if defect > delta.powi(n as i32) + 1e-11 {
            return Err(ZenoError::NumericalFailure(format!(
                "c̃ = 1 hypothesis fails at n = {n}: {defect} > {}",
                delta.powi(n as i32)
            )));
        }
    }
    Ok(inst)
}

/// Instance satisfying only ‖Mⁿ − P‖ ≤ c̃δⁿ with c̃ > 1: the decaying block
/// carries a strictly upper-triangular part, so transients overshoot δⁿ.
pub fn build_uniform_random(
    dim: usize,
    rank: usize,
    delta: f64,
    seed: u64,
    t: f64,
) -> Result<ZenoInstance> {
    if rank == 0 || rank >= dim {
        return Err(ZenoError::InvalidInput("rank must lie in 1..dim".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(ZenoError::InvalidInput("delta must lie in (0,1)".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // keep ‖M‖ ≤ 1: the strict upper part stays within the disk margin
    let margin = (1.0 - delta) / (2.0 * dim as f64);
    let (m, _p) = block_contraction(dim, rank, delta, margin, &mut rng);
    let generator = random_contraction_generator(dim, rng.gen_range(0.0..0.5), &mut rng)?;
    ZenoInstance::classify(
        m,
        generator,
        t,
        NormKind::SpectralSuperop,
        format!("uniform-random d={dim} r={rank} δ={delta} seed={seed}"),
    )
}

/// Instance with two peripheral eigenvalues {1, −1} and a normal decaying
/// block, for the alternating-limit scenario.
pub fn build_two_peripheral(dim: usize, delta: f64, seed: u64, t: f64) -> Result<ZenoInstance> {
    if dim < 4 {
        return Err(ZenoError::InvalidInput("two-peripheral scenario needs dim >= 4".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(ZenoError::InvalidInput("delta must lie in (0,1)".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries: Vec<Complex64> = vec![c(1.0), c(-1.0)];
    for k in 0..(dim - 2) {
        let modulus = if k == 0 { delta } else { rng.gen_range(0.1..=1.0) * delta };
        let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        entries.push(Complex64::from_polar(modulus, phase));
    }
    let u = haar_unitary(dim, &mut rng);
    let m = &u * diag(&entries) * dagger(&u);
    let generator = random_contraction_generator(dim, rng.gen_range(0.0..0.3), &mut rng)?;
    let inst = ZenoInstance::classify(
        m,
        generator,
        t,
        NormKind::SpectralSuperop,
        format!("two-peripheral d={dim} δ={delta} seed={seed}"),
    )?;
    if inst.spectrum.len() != 2 {
        return Err(ZenoError::NumericalFailure(format!(
            "expected two peripheral clusters, classification found {}",
            inst.spectrum.len()
        )));
    }
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeno::{zeno_error_series, BoundKind};

    #[test]
    fn optimality_build_classifies_correctly() {
        let inst = build_optimality_example(0.5, 1.0).unwrap();
        assert_eq!(inst.spectrum.len(), 1);
        assert!((inst.spectrum.eigenvalues[0] - c(1.0)).norm() < 1e-10);
        assert!((inst.spectrum.delta - 0.5).abs() < 1e-9);
        let p = &inst.spectrum.projections[0];
        assert!((p - diag(&[c(1.0), c(0.0), c(0.0)])).norm() < 1e-10);
    }

    #[test]
    fn optimality_rejects_bad_delta() {
        assert!(build_optimality_example(0.0, 1.0).is_err());
        assert!(build_optimality_example(1.0, 1.0).is_err());
    }

    #[test]
    fn depolarizing_matches_closed_form_factorization() {
        let mut rng = ChaCha8Rng::seed_from_u64(111);
        let sigma = random_density(3, &mut rng);
        let h = random_hermitian(3, &mut rng);
        let g = make_explicit_generator(&commutator_superop(&h)).unwrap();
        let inst = build_depolarizing(0.8, &sigma, g, 1.0).unwrap();
        assert!((inst.spectrum.delta - 0.4).abs() < 1e-12);
        assert_eq!(inst.spectrum.c_tilde, 1.0);
    }

    #[test]
    fn depolarizing_rejects_out_of_range_p() {
        let mut rng = ChaCha8Rng::seed_from_u64(112);
        let sigma = random_density(2, &mut rng);
        let g = make_explicit_generator(&CMatrix::zeros(4, 4)).unwrap();
        assert!(build_depolarizing(0.4, &sigma, g.clone(), 1.0).is_err());
        assert!(build_depolarizing(1.0, &sigma, g, 1.0).is_err());
    }

    #[test]
    fn random_cptp_is_seed_deterministic() {
        let a = random_cptp_superop(3, 2, 42);
        let b = random_cptp_superop(3, 2, 42);
        assert_eq!(a, b);
        let kraus = haar_cptp_kraus(3, 2, &mut ChaCha8Rng::seed_from_u64(7));
        let mut completeness = CMatrix::zeros(3, 3);
        for k in &kraus {
            completeness += dagger(k) * k;
        }
        assert!((completeness - identity(3)).norm() < 1e-12);
    }

    #[test]
    fn random_cptp_instances_have_clean_peripherals() {
        for seed in 0..10u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(77));
            let h = random_hermitian(3, &mut rng);
            let g = make_explicit_generator(&commutator_superop(&h)).unwrap();
            let inst = build_random_cptp(3, 2, seed, g, 1.0).unwrap();
            assert!(inst.spectrum.nilpotent_norms.iter().all(|&n| n <= 1e-8));
            assert!(inst.spectrum.c_tilde.is_finite());
        }
    }

    #[test]
    fn relative_entropy_basic_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(113);
        let rho = random_density(3, &mut rng);
        let sigma = random_density(3, &mut rng);
        assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-10);
        assert!(relative_entropy(&rho, &sigma).unwrap() >= -1e-10);
        // support violation: σ pure, ρ full rank
        let psi = haar_state(3, &mut rng);
        let pure = CMatrix::from_fn(3, 3, |i, j| psi[i] * psi[j].conj());
        assert!(relative_entropy(&rho, &pure).is_none());
    }

    #[test]
    fn sdpi_certificate_on_projection_is_zero() {
        // M = P: the numerator D(M(ρ)||M∘P(ρ)) = D(P(ρ)||P(ρ)) vanishes
        let mut rng = ChaCha8Rng::seed_from_u64(114);
        let sigma = random_density(3, &mut rng);
        let p = state_replacement_superop(&sigma);
        let (rate, c_tilde) = build_sdpi_certificate(&p, &p, 64, 9).unwrap();
        assert!(rate < 1e-6, "rate {rate}");
        assert!(c_tilde > 0.0);
    }

    #[test]
    fn sdpi_certificate_of_depolarizing_contracts() {
        let mut rng = ChaCha8Rng::seed_from_u64(115);
        let sigma = random_density(3, &mut rng);
        // full-rank σ keeps relative entropies finite
        let p_channel = 0.75;
        let m = depolarizing_superop(p_channel, &sigma);
        let p = state_replacement_superop(&sigma);
        let (rate, _c_tilde) = build_sdpi_certificate(&m, &p, 128, 10).unwrap();
        // per-step rate √δ̂ with δ̂ ≤ 1−p plus sampling tolerance
        assert!(
            rate * rate <= 1.0 - p_channel + 0.05,
            "sampled SDPI constant {} too large",
            rate * rate
        );
    }

    #[test]
    fn oscillator_instance_is_flagged_and_checked() {
        let sigma = fock_sigma(8).unwrap();
        let inst = build_truncated_oscillator(8, &sigma, 0.75, 1.0).unwrap();
        assert!(inst.truncated);
        assert_eq!(inst.dim(), 64);
        assert!((inst.spectrum.delta - 0.5).abs() < 1e-12);
    }

    #[test]
    fn oscillator_rejects_oversized_support() {
        let sigma = fock_sigma(8).unwrap();
        assert!(build_truncated_oscillator(4, &sigma, 0.75, 1.0).is_err());
    }

    #[test]
    fn thm1_random_instances_satisfy_hypotheses() {
        for seed in 0..8u64 {
            let inst = build_thm1_random(5, 2, 0.5, seed, 1.0).unwrap();
            assert_eq!(inst.spectrum.len(), 1);
            assert!(inst.spectrum.c_tilde <= 1.0 + 1e-9, "c̃ = {}", inst.spectrum.c_tilde);
            assert!((inst.spectrum.delta - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn uniform_random_instances_have_larger_transients() {
        let mut any_above_one = false;
        for seed in 0..8u64 {
            let inst = build_uniform_random(6, 2, 0.5, seed, 1.0).unwrap();
            assert_eq!(inst.spectrum.len(), 1);
            if inst.spectrum.c_tilde > 1.0 + 1e-9 {
                any_above_one = true;
            }
        }
        assert!(any_above_one, "strict-upper construction never produced c̃ > 1");
    }

    #[test]
    fn two_peripheral_instance_classifies_both_eigenvalues() {
        let inst = build_two_peripheral(5, 0.4, 3, 1.0).unwrap();
        let mut args: Vec<f64> = inst.spectrum.eigenvalues.iter().map(|l| l.re).collect();
        args.sort_by(f64::total_cmp);
        assert!((args[0] + 1.0).abs() < 1e-8);
        assert!((args[1] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn scenario_specs_are_reproducible() {
        let mut params = BTreeMap::new();
        params.insert("dim".to_string(), 4.0);
        params.insert("delta".to_string(), 0.4);
        let spec = ScenarioSpec::new("two-peripheral", params, 11);
        let a = spec.build(1.0).unwrap();
        let b = spec.build(1.0).unwrap();
        assert_eq!(a.m, b.m);
        assert_eq!(a.generator.superoperator, b.generator.superoperator);
    }

    #[test]
    fn unknown_scenario_is_rejected() {
        let spec = ScenarioSpec::new("nope", BTreeMap::new(), 0);
        assert!(spec.build(1.0).is_err());
    }

    #[test]
    fn sdpi_constants_feed_uniform_bound_end_to_end() {
        // estimate (√δ̂, c̃) by sampling, install them as the instance's
        // power-convergence certificate, and check the uniform bound still
        // dominates the measured errors
        let mut rng = ChaCha8Rng::seed_from_u64(117);
        let sigma = random_density(2, &mut rng);
        let p_channel = 0.85;
        let m = depolarizing_superop(p_channel, &sigma);
        let p = state_replacement_superop(&sigma);
        let (rate, c_tilde) = build_sdpi_certificate(&m, &p, 256, 12).unwrap();
        assert!(rate < 1.0 && c_tilde.is_finite());

        let h = random_hermitian(2, &mut rng);
        let g = make_explicit_generator(&commutator_superop(&h)).unwrap();
        let mut inst = build_depolarizing(p_channel, &sigma, g, 0.2).unwrap();
        inst.spectrum.delta = rate.max(inst.spectrum.delta);
        inst.spectrum.c_tilde = c_tilde.max(1.0);

        // the certificate must itself bound the sampled powers
        let mut mn = identity(4);
        for n in 1..=32 {
            mn = &mn * &inst.m;
            let err = sampled_1to1_norm(&(&mn - &inst.spectrum.p_sigma), 2).unwrap();
            assert!(
                err <= inst.spectrum.c_tilde * inst.spectrum.delta.powi(n) + 1e-10,
                "certificate fails at n = {n}"
            );
        }

        let grid: Vec<u64> = vec![8, 16, 32, 64, 128];
        let series = zeno_error_series(&inst, &grid, BoundKind::Uniform).unwrap();
        for e in &series.entries {
            let bound = e.bound.unwrap();
            assert!(e.error <= bound + 1e-12, "n = {}: {} > {bound}", e.n, e.error);
        }
    }

    #[test]
    fn lueders_projection_measurement_has_unit_rate() {
        // M = superoperator of ρ ↦ PρP, L = -i[H,·] on a 2-level system
        let mut rng = ChaCha8Rng::seed_from_u64(118);
        let proj = crate::random::random_projector(2, 1, &mut rng);
        let m = proj.transpose().kronecker(&proj);
        let h = random_hermitian(2, &mut rng);
        let g = crate::semigroup::make_hamiltonian_generator(
            &h,
            crate::semigroup::Picture::DensityMatrix,
        )
        .unwrap();
        let inst = ZenoInstance::classify(
            m,
            g,
            1.0,
            NormKind::SpectralSuperop,
            "lueders",
        )
        .unwrap();
        let grid: Vec<u64> = (4..=9).map(|k| 1u64 << k).collect();
        let series = zeno_error_series(&inst, &grid, BoundKind::None).unwrap();
        let fit = crate::zeno::rate_fit(&series, (16, 512)).unwrap();
        assert!(fit.slope > -1.15 && fit.slope < -0.85, "slope {}", fit.slope);
    }

    #[test]
    fn depolarizing_error_series_decays_like_inverse_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(116);
        let sigma = random_density(2, &mut rng);
        let h = random_hermitian(2, &mut rng);
        let g = make_explicit_generator(&commutator_superop(&h)).unwrap();
        let inst = build_depolarizing(0.9, &sigma, g, 1.0).unwrap();
        let grid: Vec<u64> = (4..=9).map(|k| 1u64 << k).collect();
        let series = zeno_error_series(&inst, &grid, BoundKind::None).unwrap();
        let fit = crate::zeno::rate_fit(&series, (16, 512)).unwrap();
        assert!(fit.slope > -1.2 && fit.slope < -0.8, "slope {}", fit.slope);
    }
}
