//! The `verify` suites: randomized sweeps over the inequality checkers and
//! oracles, one summary line per check, with the offending witness printed
//! on any violation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zeno_core::chernoff::{
    chernoff_approx_modified, chernoff_modified, chernoff_sqrt_n, product_formula_bound,
    trotter_rate,
};
use zeno_core::linalg::{
    c, diag, identity, matrix_exp, operator_norm, solve, CMatrix,
};
use zeno_core::random::{gaussian_matrix, haar_state, random_projector};
use zeno_core::scenarios::{build_thm1_random, random_cptp_superop};
use zeno_core::semigroup::{make_hamiltonian_generator, Picture};
use zeno_core::spectral::{
    classify_power_convergence_with, quasinilpotent, spectral_projection, Contour,
};
use zeno_core::zeno::counting::{binomial, counting_brute_force, counting_closed_form};
use zeno_core::zeno::lemmas::{lemma_54_vector_lhs, thm1_total_vector_error};
use zeno_core::zeno::{check_lemma_54, check_lemma_55, check_lemma_56, rate_fit};

const SLACK_TOL: f64 = 1e-9;

/// Track the worst slack seen and whether every check held. When `csv` is
/// set, every recorded report is streamed to stdout as a CSV row; summary
/// and violation lines go to stderr.
struct Tally {
    name: &'static str,
    checks: u64,
    min_slack: f64,
    failed: bool,
    csv: bool,
}

pub const REPORT_CSV_HEADER: &str = "check,lhs,rhs,slack,witness";

impl Tally {
    fn new(name: &'static str) -> Self {
        Self { name, checks: 0, min_slack: f64::INFINITY, failed: false, csv: false }
    }

    fn with_csv(name: &'static str) -> Self {
        Self { csv: true, ..Self::new(name) }
    }

    fn record(&mut self, report: &zeno_core::chernoff::InequalityReport) {
        self.checks += 1;
        self.min_slack = self.min_slack.min(report.slack);
        if self.csv {
            println!(
                "{},{},{},{},{}",
                self.name, report.lhs, report.rhs, report.slack, report.witness
            );
        }
        if report.slack < -SLACK_TOL {
            self.failed = true;
            eprintln!(
                "verify {}: VIOLATION slack={:.3e} at {}",
                self.name, report.slack, report.witness
            );
        }
    }

    fn error(&mut self, message: impl std::fmt::Display) {
        eprintln!("verify {}: ERROR {message}", self.name);
        self.failed = true;
    }

    fn finish(self) -> bool {
        let verdict = if self.failed { "FAIL" } else { "OK" };
        eprintln!(
            "verify {}: {verdict} ({} checks, min slack {:.3e})",
            self.name, self.checks, self.min_slack
        );
        !self.failed
    }
}

fn random_contraction(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = gaussian_matrix(dim, dim, rng);
    let norm = operator_norm(&g).unwrap();
    let scale: f64 = rng.gen_range(0.2..1.0);
    g * c(scale / norm)
}

/// Run a named suite; `Ok(true)` when every check held.
pub fn run_suite(suite: &str, seed: u64, trials: u64) -> Result<bool, String> {
    match suite {
        "chernoff" => Ok(verify_chernoff(seed, trials)),
        "trotter" => Ok(verify_trotter(seed, trials)),
        "lemmas" => Ok(verify_lemmas(seed, trials)),
        "spectral" => Ok(verify_spectral(seed, trials)),
        "counting" => Ok(verify_counting()),
        other => Err(format!(
            "unknown suite `{other}` (expected chernoff|trotter|lemmas|spectral|counting)"
        )),
    }
}

fn verify_chernoff(seed: u64, trials: u64) -> bool {
    println!("{REPORT_CSV_HEADER}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sqrt_tally = Tally::with_csv("chernoff/sqrt-n");
    let mut mod_tally = Tally::with_csv("chernoff/modified");
    for trial in 0..trials {
        let dim = 2 + (trial % 7) as usize;
        let c_op = random_contraction(dim, &mut rng);
        let x = haar_state(dim, &mut rng);
        let n = rng.gen_range(1..=256u64);
        match chernoff_sqrt_n(&c_op, n, &x) {
            Ok(r) => sqrt_tally.record(&r),
            Err(e) => sqrt_tally.error(format!("{e} at trial={trial} seed={seed}")),
        }
        match chernoff_modified(&c_op, n, &x) {
            Ok(r) => mod_tally.record(&r),
            Err(e) => mod_tally.error(format!("{e} at trial={trial} seed={seed}")),
        }
    }
    let mut approx_tally = Tally::with_csv("chernoff/approx-modified");
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial).wrapping_mul(0x2545));
        let dim = rng.gen_range(3..=8usize);
        let rank = rng.gen_range(1..dim);
        let p = random_projector(dim, rank, &mut rng);
        let k_dir = {
            let g = gaussian_matrix(dim, dim, &mut rng);
            &g * c(0.4 / operator_norm(&g).unwrap())
        };
        let g_dir = {
            let g = gaussian_matrix(dim, dim, &mut rng);
            &g * c(0.6 / operator_norm(&g).unwrap())
        };
        let p_map = |t: f64| -> zeno_core::Result<CMatrix> {
            let w = matrix_exp(&(&k_dir * c(t)))?;
            let w_inv = solve(&w, &identity(dim))?;
            Ok(&w * &p * w_inv)
        };
        let c_map = |t: f64| -> zeno_core::Result<CMatrix> {
            let pt = p_map(t)?;
            Ok(&pt * matrix_exp(&(&g_dir * c(t)))? * &pt)
        };
        let n = rng.gen_range(1..=256u64);
        let mut v: f64 = 0.0;
        let mut w_rate: f64 = 0.0;
        for k in 0..32 {
            let t = (1.0 / n as f64) * 0.7f64.powi(k);
            let pt = p_map(t).unwrap();
            let ct = c_map(t).unwrap();
            v = v.max(operator_norm(&(&pt - &p)).unwrap() / t);
            w_rate = w_rate.max(operator_norm(&(&ct - &pt)).unwrap() / t);
        }
        match chernoff_approx_modified(c_map, p_map, &p, v, w_rate, n) {
            Ok(r) => approx_tally.record(&r),
            Err(e) => approx_tally.error(format!("{e} at trial={trial} seed={seed}")),
        }
    }
    let a = sqrt_tally.finish();
    let b = mod_tally.finish();
    let c_ok = approx_tally.finish();
    a && b && c_ok
}

fn verify_trotter(seed: u64, trials: u64) -> bool {
    println!("{REPORT_CSV_HEADER}");
    let mut ok = true;
    // commuting pair is exact
    let d1 = zeno_core::semigroup::make_explicit_generator(&diag(&[c(-0.3), c(-0.1)])).unwrap();
    let d2 = zeno_core::semigroup::make_explicit_generator(&diag(&[c(-0.2), c(-0.4)])).unwrap();
    let commuting = trotter_rate(&d1, &d2, &[2, 4, 8, 16, 32]).unwrap();
    for e in &commuting.entries {
        println!("trotter/commuting,{},1e-12,{},n={}", e.error, 1e-12 - e.error, e.n);
    }
    let worst = commuting.entries.iter().map(|e| e.error).fold(0.0f64, f64::max);
    if worst > 1e-12 {
        eprintln!("verify trotter/commuting: FAIL worst error {worst:.3e}");
        ok = false;
    } else {
        eprintln!("verify trotter/commuting: OK (worst error {worst:.3e})");
    }
    // non-commuting qubit superoperators have unit rate
    let sx = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
    let sz = diag(&[c(1.0), c(-1.0)]);
    let l1 = make_hamiltonian_generator(&sx, Picture::DensityMatrix).unwrap();
    let l2 = make_hamiltonian_generator(&sz, Picture::DensityMatrix).unwrap();
    let grid: Vec<u64> = (4..=10).map(|k| 1u64 << k).collect();
    let series = trotter_rate(&l1, &l2, &grid).unwrap();
    let fit = rate_fit(&series, (16, 1024)).unwrap();
    if fit.slope < -1.15 || fit.slope > -0.85 {
        eprintln!("verify trotter/qubit-rate: FAIL slope {:.3}", fit.slope);
        ok = false;
    } else {
        eprintln!("verify trotter/qubit-rate: OK (slope {:.3})", fit.slope);
    }
    // randomized split-formula sweep
    let mut tally = Tally::with_csv("trotter/product-formula");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let dim = 2 + (trial % 4) as usize;
        let h1 = zeno_core::random::random_hermitian(dim, &mut rng);
        let h2 = zeno_core::random::random_hermitian(dim, &mut rng);
        let l1 = &h1 * num_complex::Complex64::new(0.0, -1.0);
        let l2 = &h2 * num_complex::Complex64::new(0.0, -1.0);
        let total = &l1 + &l2;
        let f = |s: f64| Ok(matrix_exp(&(&l1 * c(s)))? * matrix_exp(&(&l2 * c(s)))?);
        let n = rng.gen_range(1..=128u64);
        match product_formula_bound(f, &total, 1.0, n) {
            Ok(r) => tally.record(&r),
            Err(e) => tally.error(format!("{e} at trial={trial} seed={seed}")),
        }
    }
    tally.finish() && ok
}

fn verify_lemmas(seed: u64, trials: u64) -> bool {
    let mut t54 = Tally::new("lemmas/counting-step");
    let mut t55 = Tally::new("lemmas/chernoff-step");
    let mut t56 = Tally::new("lemmas/dunford-segal-step");
    let mut telescoping_ok = true;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial.wrapping_mul(0x517c)));
        let dim = rng.gen_range(3..=6usize);
        let rank = rng.gen_range(1..=dim - 2);
        let delta = rng.gen_range(0.2..0.7);
        let inst = match build_thm1_random(dim, rank, delta, seed.wrapping_add(trial), 1.0) {
            Ok(i) => i,
            Err(e) => {
                eprintln!("verify lemmas: instance build failed at trial={trial}: {e}");
                telescoping_ok = false;
                continue;
            }
        };
        for n in [1u64, 4, 16, 64] {
            let witness = format!("trial={trial} seed={seed} dim={dim} n={n}");
            match check_lemma_54(&inst, n) {
                Ok(r) => t54.record(&r),
                Err(e) => t54.error(format!("{e} at {witness}")),
            }
            for _ in 0..4 {
                let x = haar_state(dim, &mut rng);
                let r55 = check_lemma_55(&inst, n, &x).unwrap();
                t55.record(&r55);
                let r56 = check_lemma_56(&inst, n, &x).unwrap();
                t56.record(&r56);
                let total = thm1_total_vector_error(&inst, n, &x).unwrap();
                let sum = lemma_54_vector_lhs(&inst, n, &x).unwrap() + r55.lhs + r56.lhs;
                if total > sum + SLACK_TOL {
                    eprintln!(
                        "verify lemmas/telescoping: VIOLATION total {total:.3e} > sum {sum:.3e} at {witness}"
                    );
                    telescoping_ok = false;
                }
            }
        }
    }
    let a = t54.finish();
    let b = t55.finish();
    let c_ok = t56.finish();
    eprintln!(
        "verify lemmas/telescoping: {}",
        if telescoping_ok { "OK" } else { "FAIL" }
    );
    a && b && c_ok && telescoping_ok
}

fn verify_spectral(seed: u64, trials: u64) -> bool {
    let mut ok = true;
    // contour projection against the eigenbasis oracle
    let mut worst_defect: f64 = 0.0;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial.wrapping_mul(0x7e57)));
        let dim = rng.gen_range(4..=6usize);
        let cluster = rng.gen_range(1..=2usize);
        let mut eigs = Vec::new();
        for i in 0..dim {
            if i < cluster {
                eigs.push(
                    c(1.0)
                        + num_complex::Complex64::new(
                            rng.gen_range(-0.02..0.02),
                            rng.gen_range(-0.02..0.02),
                        ),
                );
            } else {
                let r: f64 = rng.gen_range(0.0..0.45);
                let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                eigs.push(num_complex::Complex64::from_polar(r, phi));
            }
        }
        let v = gaussian_matrix(dim, dim, &mut rng) + identity(dim) * c(3.0);
        let similarity = |d: &CMatrix| -> CMatrix {
            solve(&v.clone().transpose(), &(d.transpose() * v.clone().transpose()))
                .unwrap()
                .transpose()
        };
        let a = similarity(&diag(&eigs));
        let indicator: Vec<num_complex::Complex64> =
            (0..dim).map(|i| if i < cluster { c(1.0) } else { c(0.0) }).collect();
        let oracle = similarity(&diag(&indicator));
        let contour = Contour::new(c(1.0), 0.25, 32).unwrap();
        let p = spectral_projection(&a, &contour).unwrap();
        let defect = operator_norm(&(&p - &oracle)).unwrap();
        worst_defect = worst_defect.max(defect);
        if defect > 1e-10 {
            eprintln!("verify spectral/projection: VIOLATION defect {defect:.3e} at trial={trial} seed={seed}");
            ok = false;
        }
    }
    eprintln!(
        "verify spectral/projection: {} ({trials} trials, worst defect {worst_defect:.3e})",
        if ok { "OK" } else { "FAIL" }
    );
    // jordan block quasinilpotent
    let lambda = num_complex::Complex64::new(0.3, -0.2);
    let mut jordan = diag(&[lambda, lambda]);
    jordan[(0, 1)] = c(1.0);
    let contour = Contour::new(lambda, 0.5, 16).unwrap();
    let n_op = quasinilpotent(&jordan, lambda, &contour).unwrap();
    let mut expect = CMatrix::zeros(2, 2);
    expect[(0, 1)] = c(1.0);
    let jordan_defect = (n_op - expect).norm();
    if jordan_defect > 1e-10 {
        eprintln!("verify spectral/quasinilpotent: FAIL defect {jordan_defect:.3e}");
        ok = false;
    } else {
        eprintln!("verify spectral/quasinilpotent: OK (defect {jordan_defect:.3e})");
    }
    // channel nilpotents
    let mut worst_nil: f64 = 0.0;
    let mut channel_ok = true;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial));
        let dim = rng.gen_range(2..=5usize);
        let env = rng.gen_range(2..=3usize);
        let m = random_cptp_superop(dim, env, seed.wrapping_add(trial).wrapping_mul(31));
        match classify_power_convergence_with(&m, 1e-8, 8, &|x| {
            zeno_core::zeno::sampled_1to1_norm(x, dim)
        }) {
            Ok(spectrum) => {
                for &nil in &spectrum.nilpotent_norms {
                    worst_nil = worst_nil.max(nil);
                    if nil > 1e-8 {
                        eprintln!(
                            "verify spectral/channel-nilpotents: VIOLATION {nil:.3e} at trial={trial} seed={seed}"
                        );
                        channel_ok = false;
                    }
                }
            }
            Err(e) => {
                eprintln!("verify spectral/channel-nilpotents: ERROR {e} at trial={trial}");
                channel_ok = false;
            }
        }
    }
    eprintln!(
        "verify spectral/channel-nilpotents: {} ({trials} channels, worst {worst_nil:.3e})",
        if channel_ok { "OK" } else { "FAIL" }
    );
    ok && channel_ok
}

fn verify_counting() -> bool {
    let mut ok = true;
    let mut checked = 0u64;
    for n in 1..=14u64 {
        for k in 0..=n {
            let mut row: u128 = 0;
            for j in 0..=n {
                let cf = counting_closed_form(j, n, k).unwrap();
                let bf = counting_brute_force(j, n, k).unwrap();
                if cf != bf {
                    eprintln!("verify counting: MISMATCH N({j},{n},{k}): closed {cf} brute {bf}");
                    ok = false;
                }
                row += cf;
                checked += 1;
            }
            if row != binomial(n, k) {
                eprintln!("verify counting: ROW SUM at n={n} k={k}: {row} != C(n,k)");
                ok = false;
            }
        }
    }
    eprintln!(
        "verify counting: {} ({checked} triples, closed form ≡ enumeration for n ≤ 14)",
        if ok { "OK" } else { "FAIL" }
    );
    ok
}
