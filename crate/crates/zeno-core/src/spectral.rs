//! Holomorphic functional calculus by contour quadrature on circles:
//! spectral projections, quasinilpotent parts, classification of a
//! contraction into peripheral eigenvalues plus a gap, semicontinuity
//! radii for perturbed spectra, and perturbed Riesz projections.
//!
//! All contours are circles; the trapezoidal rule converges geometrically
//! for the periodic analytic integrands arising here, and node counts are
//! doubled adaptively. Per-node resolvent solves are reduced in a fixed
//! order so results are deterministic.

use crate::error::{Result, ZenoError};
use crate::linalg::{c, check_finite, eig, identity, operator_norm, resolvent, CMatrix};
use num_complex::Complex64;

/// Default membership/clustering tolerance for peripheral eigenvalues.
pub const PERIPHERAL_TOL: f64 = 1e-8;

/// Adaptive contour quadrature stops once doubling changes the result by
/// less than this.
pub const CONTOUR_CONVERGENCE_TOL: f64 = 1e-11;

/// Node cap of the adaptive contour quadrature.
pub const MAX_CONTOUR_NODES: usize = 4096;

/// Idempotency / commutation tolerance on returned projections.
pub const PROJECTION_TOL: f64 = 1e-9;

/// Quasinilpotent norm above which a peripheral eigenvalue disqualifies
/// the matrix from uniform power convergence.
pub const NILPOTENT_TOL: f64 = 1e-6;

/// Power-convergence defects at or below this are double-precision noise
/// and do not enter the measured c̃.
pub const C_TILDE_NOISE_FLOOR: f64 = 1e-12;

/// A circular integration contour.
#[derive(Debug, Clone)]
pub struct Contour {
    pub center: Complex64,
    pub radius: f64,
    /// Initial node count; must be a power of two ≥ 8 so adaptive doubling
    /// can reuse previously evaluated nodes.
    pub nodes: usize,
}

impl Contour {
    pub fn new(center: Complex64, radius: f64, nodes: usize) -> Result<Self> {
        if radius <= 0.0 || !radius.is_finite() {
            return Err(ZenoError::InvalidInput(format!(
                "contour radius must be positive, got {radius}"
            )));
        }
        if nodes < 8 || !nodes.is_power_of_two() {
            return Err(ZenoError::InvalidInput(format!(
                "contour nodes must be a power of two >= 8, got {nodes}"
            )));
        }
        Ok(Self { center, radius, nodes })
    }

    /// Circumference 2πr.
    pub fn length(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.radius
    }

    /// The quadrature node z = center + r·e^{iθ} at angle θ.
    fn point(&self, theta: f64) -> Complex64 {
        self.center + Complex64::new(0.0, theta).exp() * c(self.radius)
    }
}

/// Peripheral spectral data of a power-convergent contraction:
/// eigenvalues of modulus ≈ 1 with their spectral projections, the gap δ of
/// the remaining spectrum, and the uniform power-convergence constant c̃
/// with ‖Mⁿ − Σⱼ λⱼⁿ Pⱼ‖ ≤ c̃ δⁿ.
#[derive(Debug, Clone)]
pub struct PeripheralSpectrum {
    pub eigenvalues: Vec<Complex64>,
    pub projections: Vec<CMatrix>,
    pub p_sigma: CMatrix,
    pub delta: f64,
    pub c_tilde: f64,
    pub nilpotent_norms: Vec<f64>,
    /// Radius used for the per-eigenvalue contours.
    pub contour_radius: f64,
}

impl PeripheralSpectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// Constants of the semicontinuity bound for a contour around part of
/// σ(M(0)) under a Lipschitz perturbation ‖M(t)−M(0)‖ ≤ tb:
/// R = sup_z ‖R(z, M(0))‖, d = R·inf_z (2+2|z|²)/(1+2|z|²), the curve
/// length, and the admissible radius ε.
#[derive(Debug, Clone, Copy)]
pub struct PerturbationData {
    pub resolvent_sup: f64,
    pub d: f64,
    pub curve_length: f64,
    pub epsilon: f64,
    pub b: f64,
}

/// Adaptive trapezoidal contour integral (1/2πi)∮ f(z, R(z,a)) dz on a
/// circle, doubling nodes until successive results differ by less than
/// [`CONTOUR_CONVERGENCE_TOL`].
fn contour_integral<F>(a: &CMatrix, contour: &Contour, f: F) -> Result<CMatrix>
where
    F: Fn(Complex64, &CMatrix) -> CMatrix,
{
    let dim = a.nrows();
    let eval_node = |theta: f64| -> Result<CMatrix> {
        let z = contour.point(theta);
        let rz = resolvent(a, z).map_err(|e| match e {
            ZenoError::ResolventSingular { z, .. } => ZenoError::ContourThroughSpectrum { z },
            other => other,
        })?;
        // dz = i r e^{iθ} dθ; the 1/(2πi) and the uniform weight 2π/N are
        // folded into the final scale r/N
        Ok(f(z, &rz) * Complex64::new(0.0, theta).exp())
    };

    let mut n = contour.nodes;
    let mut sum = CMatrix::zeros(dim, dim);
    for k in 0..n {
        sum += eval_node(2.0 * std::f64::consts::PI * k as f64 / n as f64)?;
    }
    let mut current = &sum * c(contour.radius / n as f64);

    loop {
        if 2 * n > MAX_CONTOUR_NODES {
            return Err(ZenoError::QuadratureFailure {
                max_nodes: MAX_CONTOUR_NODES,
                last_change: f64::NAN,
            });
        }
        // doubling keeps the old grid as the even-index nodes
        let mut odd = CMatrix::zeros(dim, dim);
        for k in 0..n {
            odd += eval_node(std::f64::consts::PI * (2 * k + 1) as f64 / n as f64)?;
        }
        n *= 2;
        sum += odd;
        let refined = &sum * c(contour.radius / n as f64);
        let change = operator_norm(&(&refined - &current))?;
        current = refined;
        if change < CONTOUR_CONVERGENCE_TOL {
            return Ok(current);
        }
        if n >= MAX_CONTOUR_NODES {
            return Err(ZenoError::QuadratureFailure {
                max_nodes: MAX_CONTOUR_NODES,
                last_change: change,
            });
        }
    }
}

/// Riesz spectral projection P = (1/2πi)∮ R(z,a) dz over the contour.
///
/// The returned matrix satisfies ‖P² − P‖ ≤ 1e-9 and ‖PA − AP‖ ≤ 1e-9 or an
/// error is raised.
pub fn spectral_projection(a: &CMatrix, contour: &Contour) -> Result<CMatrix> {
    check_finite(a)?;
    let p = contour_integral(a, contour, |_z, rz| rz.clone())?;
    let idem = operator_norm(&(&p * &p - &p))?;
    if idem > PROJECTION_TOL {
        return Err(ZenoError::NumericalFailure(format!(
            "contour projection is not idempotent (defect {idem:.3e}); the contour likely fails to separate the spectrum"
        )));
    }
    let comm = operator_norm(&(&p * a - a * &p))?;
    if comm > PROJECTION_TOL {
        return Err(ZenoError::NumericalFailure(format!(
            "contour projection does not commute with the matrix (defect {comm:.3e})"
        )));
    }
    Ok(p)
}

/// Quasinilpotent part N = (1/2πi)∮ (z−λ) R(z,a) dz for an isolated
/// eigenvalue cluster at λ; satisfies AP = λP + N.
pub fn quasinilpotent(a: &CMatrix, lambda: Complex64, contour: &Contour) -> Result<CMatrix> {
    check_finite(a)?;
    contour_integral(a, contour, |z, rz| rz * (z - lambda))
}

/// Group eigenvalues into clusters of radius tol by transitive closure;
/// returns cluster means ordered by decreasing argument.
fn cluster_peripheral(values: &[Complex64], tol: f64) -> Vec<Complex64> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut sums: std::collections::BTreeMap<usize, (Complex64, usize)> = Default::default();
    for (i, value) in values.iter().enumerate() {
        let r = find(&mut parent, i);
        let e = sums.entry(r).or_insert((Complex64::new(0.0, 0.0), 0));
        e.0 += value;
        e.1 += 1;
    }
    let mut means: Vec<Complex64> = sums
        .values()
        .map(|(s, k)| {
            let mean = s / c(*k as f64);
            // peripheral eigenvalues live on the unit circle by definition;
            // snap the representative there to keep λⁿ from drifting
            mean / c(mean.norm())
        })
        .collect();
    means.sort_by(|a, b| b.arg().partial_cmp(&a.arg()).unwrap());
    means
}

/// Contour radius around peripheral eigenvalues: a third of the smallest
/// pairwise distance, capped at half the distance to the interior disk;
/// half that distance alone when only one eigenvalue is present.
fn peripheral_contour_radius(lambdas: &[Complex64], delta: f64) -> f64 {
    let gap_to_disk = (1.0 - delta) / 2.0;
    let mut min_pair = f64::INFINITY;
    for i in 0..lambdas.len() {
        for j in (i + 1)..lambdas.len() {
            min_pair = min_pair.min((lambdas[i] - lambdas[j]).norm());
        }
    }
    if min_pair.is_finite() {
        (min_pair / 3.0).min(gap_to_disk)
    } else {
        gap_to_disk
    }
}

/// Classify a contraction per the uniform-power-convergence dichotomy:
/// peripheral eigenvalues (modulus ≥ 1 − `peripheral_tol`, clustered at the
/// same tolerance) receive contour-integral projections; `delta` is the
/// largest remaining modulus and `c_tilde` the measured power-convergence
/// constant over n ≤ `n_max`.
///
/// Fails with [`ZenoError::NotPowerConvergent`] when a peripheral
/// quasinilpotent exceeds [`NILPOTENT_TOL`].
pub fn classify_power_convergence(
    m: &CMatrix,
    peripheral_tol: f64,
    n_max: usize,
) -> Result<PeripheralSpectrum> {
    classify_power_convergence_with(m, peripheral_tol, n_max, &|a| operator_norm(a))
}

/// [`classify_power_convergence`] with the contraction precondition and the
/// c̃ measurement taken in a caller-supplied norm (the spectral structure
/// itself is norm independent). Used for trace-norm contractions such as
/// quantum channels whose superoperator matrices exceed 1 in spectral norm.
pub fn classify_power_convergence_with(
    m: &CMatrix,
    peripheral_tol: f64,
    n_max: usize,
    norm_fn: &dyn Fn(&CMatrix) -> Result<f64>,
) -> Result<PeripheralSpectrum> {
    check_finite(m)?;
    if !m.is_square() || m.nrows() == 0 {
        return Err(ZenoError::InvalidInput(
            "classification needs a square non-empty matrix".into(),
        ));
    }
    let norm = norm_fn(m)?;
    if norm > 1.0 + 1e-9 {
        return Err(ZenoError::InvalidInput(format!(
            "classification requires a contraction, ‖m‖ = {norm:.12}"
        )));
    }
    let dim = m.nrows();
    let pairs = eig(m)?;
    let peripheral: Vec<Complex64> = pairs
        .iter()
        .map(|p| p.value)
        .filter(|v| v.norm() >= 1.0 - peripheral_tol)
        .collect();
    let delta_raw = pairs
        .iter()
        .map(|p| p.value.norm())
        .filter(|r| *r < 1.0 - peripheral_tol)
        .fold(0.0_f64, f64::max);
    let delta = delta_raw + 1e-12;

    let lambdas = cluster_peripheral(&peripheral, peripheral_tol);
    let radius = peripheral_contour_radius(&lambdas, delta);

    let mut projections = Vec::with_capacity(lambdas.len());
    let mut nilpotent_norms = Vec::with_capacity(lambdas.len());
    for &lambda in &lambdas {
        let contour = Contour::new(lambda, radius, 32)?;
        let p = spectral_projection(m, &contour)?;
        let n_op = quasinilpotent(m, lambda, &contour)?;
        let n_norm = operator_norm(&n_op)?;
        if n_norm > NILPOTENT_TOL {
            return Err(ZenoError::NotPowerConvergent {
                nilpotent_norm: n_norm,
                tol: NILPOTENT_TOL,
            });
        }
        projections.push(p);
        nilpotent_norms.push(n_norm);
    }

    for i in 0..projections.len() {
        for j in 0..projections.len() {
            let prod = &projections[i] * &projections[j];
            let expect = if i == j {
                projections[i].clone()
            } else {
                CMatrix::zeros(dim, dim)
            };
            let defect = operator_norm(&(prod - expect))?;
            if defect > 1e-8 {
                return Err(ZenoError::NumericalFailure(format!(
                    "projection orthogonality defect {defect:.3e} between clusters {i} and {j}"
                )));
            }
        }
    }

    let p_sigma = projections
        .iter()
        .fold(CMatrix::zeros(dim, dim), |acc, p| acc + p);

    // measured uniform power-convergence constant
    let mut c_tilde: f64 = 0.0;
    let mut mn = identity(dim);
    for n in 1..=n_max.max(1) {
        mn = &mn * m;
        let mut limit = CMatrix::zeros(dim, dim);
        for (lambda, p) in lambdas.iter().zip(&projections) {
            limit += p * lambda.powu(n as u32);
        }
        let err = (norm_fn(&(&mn - limit))? - C_TILDE_NOISE_FLOOR).max(0.0);
        if err > 0.0 {
            c_tilde = c_tilde.max(err / delta.powi(n as i32));
        }
    }

    Ok(PeripheralSpectrum {
        eigenvalues: lambdas,
        projections,
        p_sigma,
        delta,
        c_tilde,
        nilpotent_norms,
        contour_radius: radius,
    })
}

/// Constants of the semicontinuity lemma on a circle, with suprema and
/// infima evaluated on the quadrature nodes (doubled adaptively until the
/// resolvent sup stabilizes). A zero Lipschitz constant yields ε = ∞.
pub fn semicontinuity_epsilon(m0: &CMatrix, contour: &Contour, b: f64) -> Result<PerturbationData> {
    check_finite(m0)?;
    if b < 0.0 {
        return Err(ZenoError::InvalidInput("perturbation bound b must be >= 0".into()));
    }
    let sup_on = |n: usize| -> Result<(f64, f64, f64)> {
        let mut r_sup: f64 = 0.0;
        let mut inv_one_plus_sq: f64 = f64::INFINITY;
        let mut d_factor: f64 = f64::INFINITY;
        for k in 0..n {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            let z = contour.point(theta);
            let rz = resolvent(m0, z).map_err(|e| match e {
                ZenoError::ResolventSingular { z, .. } => ZenoError::ContourThroughSpectrum { z },
                other => other,
            })?;
            r_sup = r_sup.max(operator_norm(&rz)?);
            let zsq = z.norm_sqr();
            inv_one_plus_sq = inv_one_plus_sq.min(1.0 / (1.0 + zsq));
            d_factor = d_factor.min((2.0 + 2.0 * zsq) / (1.0 + 2.0 * zsq));
        }
        Ok((r_sup, inv_one_plus_sq, d_factor))
    };
    let mut n = contour.nodes;
    let (mut r_sup, mut inv_one_plus_sq, mut d_factor) = sup_on(n)?;
    while n < MAX_CONTOUR_NODES {
        n *= 2;
        let (r2, i2, d2) = sup_on(n)?;
        let stable = (r2 - r_sup).abs() <= 1e-9 * r2.max(1.0);
        r_sup = r2;
        inv_one_plus_sq = i2;
        d_factor = d2;
        if stable {
            break;
        }
    }

    let epsilon = if b == 0.0 {
        f64::INFINITY
    } else {
        (1.0 / (2.0 * b)) * inv_one_plus_sq / (1.0 + r_sup * r_sup).sqrt()
    };
    Ok(PerturbationData {
        resolvent_sup: r_sup,
        d: r_sup * d_factor,
        curve_length: contour.length(),
        epsilon,
        b,
    })
}

/// Perturbed Riesz projection P(t) = (1/2πi)∮ R(z, A + tB(t)) dz.
///
/// Valid for t within the semicontinuity radius of the contour; the result
/// is checked for idempotency and against the norm bound ‖P(t)‖ ≤ d|Γ|/2π.
pub fn perturbed_projection<F>(a: &CMatrix, b_map: F, t: f64, contour: &Contour) -> Result<CMatrix>
where
    F: Fn(f64) -> CMatrix,
{
    check_finite(a)?;
    if t < 0.0 {
        return Err(ZenoError::InvalidInput("perturbation time must be >= 0".into()));
    }
    let bt = b_map(t);
    check_finite(&bt)?;
    let b_norm = operator_norm(&bt)?;
    let perturbed = a + bt * c(t);
    let p = spectral_projection(&perturbed, contour)?;
    let data = semicontinuity_epsilon(a, contour, b_norm)?;
    let p_norm = operator_norm(&p)?;
    let cap = data.d * data.curve_length / (2.0 * std::f64::consts::PI) + 1e-8;
    if p_norm > cap {
        return Err(ZenoError::NumericalFailure(format!(
            "perturbed projection norm {p_norm:.6} exceeds the resolvent bound {cap:.6}"
        )));
    }
    Ok(p)
}

/// Derivative of the perturbed projection at t = 0,
/// P′ = (1/2πi)∮ R(z,A) B(0) R(z,A) dz.
pub fn projection_derivative(a: &CMatrix, b0: &CMatrix, contour: &Contour) -> Result<CMatrix> {
    check_finite(a)?;
    check_finite(b0)?;
    contour_integral(a, contour, |_z, rz| rz * b0 * rz)
}

/// Spectral radius through the eigendecomposition.
pub fn spectral_radius(a: &CMatrix) -> Result<f64> {
    Ok(eig(a)?.iter().map(|p| p.value.norm()).fold(0.0, f64::max))
}

/// Reconstruction defect of a classification:
/// ‖M − Σⱼ λⱼ Pⱼ − M(1 − P_Σ)‖.
pub fn reconstruction_defect(m: &CMatrix, spectrum: &PeripheralSpectrum) -> Result<f64> {
    let dim = m.nrows();
    let mut rebuilt = m * (identity(dim) - &spectrum.p_sigma);
    for (lambda, p) in spectrum.eigenvalues.iter().zip(&spectrum.projections) {
        rebuilt += p * *lambda;
    }
    operator_norm(&(m - rebuilt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, matrix_power, solve, zeros};
    use crate::random::{gaussian_matrix, haar_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn similarity(v: &CMatrix, d: &CMatrix) -> CMatrix {
        // v d v^{-1}
        solve(&v.transpose(), &(d.transpose() * v.transpose()))
            .unwrap()
            .transpose()
    }

    #[test]
    fn projection_separates_diagonal_eigenvalues() {
        let a = diag(&[c(1.0), c(0.5)]);
        let contour = Contour::new(c(1.0), 0.2, 16).unwrap();
        let p = spectral_projection(&a, &contour).unwrap();
        assert!((p - diag(&[c(1.0), c(0.0)])).norm() < 1e-12);
    }

    #[test]
    fn projection_onto_full_spectrum_is_identity() {
        let contour = Contour::new(c(1.0), 0.5, 16).unwrap();
        let p = spectral_projection(&identity(3), &contour).unwrap();
        assert!((p - identity(3)).norm() < 1e-12);
    }

    #[test]
    fn contour_through_spectrum_is_detected() {
        let a = diag(&[c(1.0), c(0.5)]);
        let contour = Contour::new(c(0.5), 0.5, 16).unwrap();
        let err = spectral_projection(&a, &contour).unwrap_err();
        assert!(
            matches!(err, ZenoError::ContourThroughSpectrum { .. })
                || matches!(err, ZenoError::QuadratureFailure { .. }),
            "unexpected error {err}"
        );
    }

    #[test]
    fn projection_matches_eigendecomposition_oracle() {
        // clustered eigenvalues with a known eigenbasis as oracle
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..5 {
            let g = gaussian_matrix(6, 6, &mut rng);
            let v = &g + identity(6) * c(3.0); // keep the basis well conditioned
            let d = diag(&[
                c(1.0),
                c(0.97),
                Complex64::new(0.0, 1.0),
                c(-0.2),
                c(0.1),
                Complex64::new(0.05, 0.05),
            ]);
            let a = similarity(&v, &d);
            // oracle projector onto the {1, 0.97} cluster
            let ind = diag(&[c(1.0), c(1.0), c(0.0), c(0.0), c(0.0), c(0.0)]);
            let oracle = similarity(&v, &ind);
            let contour = Contour::new(c(0.985), 0.1, 32).unwrap();
            let p = spectral_projection(&a, &contour).unwrap();
            assert!(
                operator_norm(&(&p - &oracle)).unwrap() < 1e-10,
                "defect {}",
                operator_norm(&(&p - &oracle)).unwrap()
            );
        }
    }

    #[test]
    fn quasinilpotent_vanishes_for_semisimple_eigenvalue() {
        let a = diag(&[c(2.0), c(3.0)]);
        let contour = Contour::new(c(2.0), 0.3, 16).unwrap();
        let n = quasinilpotent(&a, c(2.0), &contour).unwrap();
        assert!(n.norm() < 1e-12);
    }

    #[test]
    fn eigenvalue_relation_ap_equals_lambda_p_plus_n() {
        // AP = λP + N for an isolated eigenvalue cluster
        let mut rng = ChaCha8Rng::seed_from_u64(70);
        let g = gaussian_matrix(5, 5, &mut rng);
        let v = &g + identity(5) * c(3.0);
        let lambda = Complex64::new(0.9, 0.3);
        let d = diag(&[lambda, c(0.2), c(-0.1), Complex64::new(0.0, 0.25), c(0.05)]);
        let a = similarity(&v, &d);
        let contour = Contour::new(lambda, 0.25, 32).unwrap();
        let p = spectral_projection(&a, &contour).unwrap();
        let n = quasinilpotent(&a, lambda, &contour).unwrap();
        let defect = operator_norm(&(&a * &p - &p * lambda - &n)).unwrap();
        assert!(defect < 1e-9, "AP - λP - N defect {defect:.3e}");
        // semisimple eigenvalue: the quasinilpotent vanishes
        assert!(operator_norm(&n).unwrap() < 1e-9);
    }

    #[test]
    fn quasinilpotent_recovers_jordan_block() {
        let lambda = Complex64::new(0.4, 0.1);
        let mut a = diag(&[lambda, lambda]);
        a[(0, 1)] = c(1.0);
        let contour = Contour::new(lambda, 0.5, 16).unwrap();
        let n = quasinilpotent(&a, lambda, &contour).unwrap();
        let mut expect = zeros(2, 2);
        expect[(0, 1)] = c(1.0);
        assert!((n - expect).norm() < 1e-11);
        // P = identity here, so AP = λP + N is the matrix itself
        let p = spectral_projection(&a, &contour).unwrap();
        assert!((p.clone() - identity(2)).norm() < 1e-11);
    }

    #[test]
    fn classify_diagonal_contraction() {
        let m = diag(&[c(1.0), c(0.3), c(0.3)]);
        let s = classify_power_convergence(&m, PERIPHERAL_TOL, 64).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.eigenvalues[0] - c(1.0)).norm() < 1e-10);
        assert!((s.projections[0].clone() - diag(&[c(1.0), c(0.0), c(0.0)])).norm() < 1e-10);
        assert!((s.delta - 0.3).abs() < 1e-9);
        assert!(s.c_tilde <= 1.0 + 1e-6);
    }

    #[test]
    fn classify_rejects_expansions() {
        let m = diag(&[c(1.5)]);
        assert!(classify_power_convergence(&m, PERIPHERAL_TOL, 16).is_err());
    }

    #[test]
    fn classify_rejects_peripheral_jordan_block() {
        // a defective unit eigenvalue is impossible for a true contraction
        // (that is the content of the equivalence this classification
        // implements), so drive the nilpotent check through the
        // norm-generic entry point with a permissive norm
        let mut m = diag(&[c(1.0), c(1.0), c(0.2)]);
        m[(0, 1)] = c(1.0);
        let err =
            classify_power_convergence_with(&m, PERIPHERAL_TOL, 16, &|_| Ok(0.0)).unwrap_err();
        assert!(
            matches!(err, ZenoError::NotPowerConvergent { .. }),
            "unexpected {err}"
        );
    }

    #[test]
    fn classify_two_peripheral_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        let u = haar_unitary(4, &mut rng);
        let m = &u * diag(&[c(1.0), c(-1.0), c(0.4), Complex64::new(0.0, 0.3)]) * u.adjoint();
        let s = classify_power_convergence(&m, PERIPHERAL_TOL, 64).unwrap();
        assert_eq!(s.len(), 2);
        assert!((s.delta - 0.4).abs() < 1e-9);
        // reconstruction: M = Σ λ P + M(1-PΣ) and the rest has radius ≤ δ
        assert!(reconstruction_defect(&m, &s).unwrap() < 1e-8);
        let rest = &m * (identity(4) - &s.p_sigma);
        assert!(spectral_radius(&rest).unwrap() <= s.delta + 1e-9);
    }

    #[test]
    fn classified_power_bound_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        let u = haar_unitary(5, &mut rng);
        let m = &u
            * diag(&[c(1.0), Complex64::from_polar(1.0, 2.1), c(0.5), c(-0.3), c(0.2)])
            * u.adjoint();
        let s = classify_power_convergence(&m, PERIPHERAL_TOL, 64).unwrap();
        let mut mn = identity(5);
        for n in 1..=128 {
            mn = &mn * &m;
            let mut limit = zeros(5, 5);
            for (lambda, p) in s.eigenvalues.iter().zip(&s.projections) {
                limit += p * lambda.powu(n as u32);
            }
            let err = operator_norm(&(&mn - limit)).unwrap();
            assert!(
                err <= s.c_tilde * s.delta.powi(n) + 1e-12,
                "n = {n}: {err} > {}",
                s.c_tilde * s.delta.powi(n)
            );
        }
    }

    #[test]
    fn projection_sum_over_full_partition_is_identity() {
        let a = diag(&[c(1.0), c(0.5), Complex64::new(-0.4, 0.2)]);
        let p1 = spectral_projection(&a, &Contour::new(c(1.0), 0.2, 16).unwrap()).unwrap();
        let p2 = spectral_projection(&a, &Contour::new(c(0.5), 0.2, 16).unwrap()).unwrap();
        let p3 = spectral_projection(&a, &Contour::new(Complex64::new(-0.4, 0.2), 0.2, 16).unwrap())
            .unwrap();
        assert!((p1 + p2 + p3 - identity(3)).norm() < 1e-9);
    }

    #[test]
    fn trapezoid_converges_geometrically() {
        // fixed-node quadrature against the known exact projector
        let a = diag(&[c(1.0), c(0.2)]);
        let exact = diag(&[c(1.0), c(0.0)]);
        let contour = Contour::new(c(1.0), 0.35, 8).unwrap();
        let mut errors = Vec::new();
        for n in [8usize, 16, 32, 64] {
            let mut sum = zeros(2, 2);
            for k in 0..n {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                let z = contour.point(theta);
                let rz = resolvent(&a, z).unwrap();
                sum += rz * Complex64::new(0.0, theta).exp();
            }
            let p = sum * c(contour.radius / n as f64);
            errors.push((p - &exact).norm());
        }
        for w in errors.windows(2) {
            assert!(w[1] <= w[0] * 0.5 || w[1] < 1e-12, "errors {errors:?}");
        }
    }

    #[test]
    fn semicontinuity_hand_computed_example() {
        // m0 = 0 in 2 dims, circle of radius 1/2 at the origin, b = 1:
        // R = 2, inf (1+|z|²)^{-1} = 0.8, ε = 0.4/sqrt(5)
        let m0 = zeros(2, 2);
        let contour = Contour::new(c(0.0), 0.5, 16).unwrap();
        let data = semicontinuity_epsilon(&m0, &contour, 1.0).unwrap();
        assert!((data.resolvent_sup - 2.0).abs() < 1e-10);
        assert!((data.epsilon - 0.4 / 5.0_f64.sqrt()).abs() < 1e-10);
        assert!((data.d - 2.0 * (2.5 / 1.5)).abs() < 1e-9);
        assert!((data.curve_length - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn epsilon_decreases_in_b() {
        let m0 = diag(&[c(0.2), c(0.9)]);
        let contour = Contour::new(c(0.2), 0.3, 16).unwrap();
        let mut prev = f64::INFINITY;
        for b in [0.0, 0.5, 1.0, 2.0, 8.0] {
            let eps = semicontinuity_epsilon(&m0, &contour, b).unwrap().epsilon;
            assert!(eps <= prev);
            prev = eps;
        }
        assert!(semicontinuity_epsilon(&m0, &contour, 0.0)
            .unwrap()
            .epsilon
            .is_infinite());
    }

    #[test]
    fn perturbations_within_epsilon_keep_separation() {
        let mut rng = ChaCha8Rng::seed_from_u64(74);
        let m0 = diag(&[c(1.0), c(0.3), c(-0.2)]);
        let contour = Contour::new(c(1.0), 0.25, 16).unwrap();
        for _ in 0..20 {
            let g = gaussian_matrix(3, 3, &mut rng);
            let b_dir = &g * c(1.0 / operator_norm(&g).unwrap());
            let data = semicontinuity_epsilon(&m0, &contour, 1.0).unwrap();
            let t = data.epsilon * 0.999;
            let mt = &m0 + &b_dir * c(t);
            for k in 0..contour.nodes {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / contour.nodes as f64;
                let z = contour.point(theta);
                assert!(resolvent(&mt, z).is_ok(), "separation lost at node {k}");
            }
        }
    }

    #[test]
    fn perturbed_projection_at_zero_matches_plain() {
        let a = diag(&[c(1.0), c(0.4)]);
        let contour = Contour::new(c(1.0), 0.2, 16).unwrap();
        let b0 = diag(&[c(0.1), c(0.2)]);
        let p0 = perturbed_projection(&a, |_| b0.clone(), 0.0, &contour).unwrap();
        let plain = spectral_projection(&a, &contour).unwrap();
        assert!((p0 - plain).norm() < 1e-12);
    }

    #[test]
    fn zeroth_and_first_order_expansions_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(75);
        let a = diag(&[c(1.0), c(0.3)]);
        let contour = Contour::new(c(1.0), 0.3, 16).unwrap();
        let g = gaussian_matrix(2, 2, &mut rng);
        let b0 = &g * c(1.0 / operator_norm(&g).unwrap());
        let data = semicontinuity_epsilon(&a, &contour, 1.0).unwrap();
        let t = data.epsilon * 0.5;
        let p_t = perturbed_projection(&a, |_| b0.clone(), t, &contour).unwrap();
        let p_0 = spectral_projection(&a, &contour).unwrap();
        let two_pi = 2.0 * std::f64::consts::PI;
        let zeroth = operator_norm(&(&p_t - &p_0)).unwrap();
        let zeroth_cap =
            t * data.resolvent_sup * 1.0 * data.d * data.curve_length / two_pi + 1e-8;
        assert!(zeroth <= zeroth_cap, "zeroth {zeroth} cap {zeroth_cap}");
        let p_prime = projection_derivative(&a, &b0, &contour).unwrap();
        let first = operator_norm(&(&p_t - &p_0 - &p_prime * c(t))).unwrap();
        let first_cap = t * data.resolvent_sup.powi(2) * data.curve_length / two_pi
            * (t * 1.0 * data.d)
            + 1e-8;
        assert!(first <= first_cap, "first {first} cap {first_cap}");
    }

    #[test]
    fn power_formula_through_contour() {
        // (1/2πi)∮ z^k R(z, A) dz over a contour enclosing all of σ(A)
        // reproduces A^k
        let mut rng = ChaCha8Rng::seed_from_u64(76);
        let g = gaussian_matrix(3, 3, &mut rng);
        let a = &g * c(0.5 / operator_norm(&g).unwrap());
        let contour = Contour::new(c(0.0), 0.8, 32).unwrap();
        for k in [1usize, 3] {
            let got = contour_integral(&a, &contour, |z, rz| rz * z.powu(k as u32)).unwrap();
            assert!((got - matrix_power(&a, k as u64)).norm() < 1e-10);
        }
    }
}
