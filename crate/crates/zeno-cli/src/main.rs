//! Command-line runner for the Zeno product-formula laboratory:
//! experiment sweeps from JSON configs, verification suites, rate fits,
//! contour projections of matrices from disk, and counting tables.

mod config;
mod report;
mod verify;

use clap::{Parser, Subcommand};
use config::{ExperimentConfig, OutputFormat};
use rayon::prelude::*;
use report::{JsonReport, MatrixFile, RateFitReport, ReportRow};
use std::path::PathBuf;
use std::process::ExitCode;
use zeno_core::spectral::{spectral_projection, Contour};
use zeno_core::zeno::{rate_fit, BoundKind, ErrorSeries};
use zeno_core::ZenoError;

const EXIT_OK: u8 = 0;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_VIOLATION: u8 = 4;

#[derive(Parser)]
#[command(name = "zeno", about = "Quantum Zeno product-formula laboratory", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment sweep from a JSON config and write the report.
    Run { config: PathBuf },
    /// Run a verification suite: chernoff | trotter | lemmas | spectral | counting.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 20)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fit log-log convergence rates for a config and print them as JSON.
    Rates { config: PathBuf },
    /// Contour-integral spectral projection of a matrix file.
    Spectral {
        matrix: PathBuf,
        /// Contour center, e.g. "1", "0.5+0.2i", "-0.3-1i".
        #[arg(long)]
        center: String,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 32)]
        nodes: usize,
    },
    /// Print the transition-count table N(j, n, k) for a given n.
    Counting {
        #[arg(long)]
        n: u64,
    },
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { config } => cmd_run(&config),
        Command::Verify { suite, trials, seed } => cmd_verify(&suite, seed, trials),
        Command::Rates { config } => cmd_rates(&config),
        Command::Spectral { matrix, center, radius, nodes } => {
            cmd_spectral(&matrix, &center, radius, nodes)
        }
        Command::Counting { n } => cmd_counting(n),
    };
    ExitCode::from(code)
}

/// ZENO_THREADS caps the worker pool; default is the machine's cores.
fn init_thread_pool() {
    if let Ok(value) = std::env::var("ZENO_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            if threads >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
            }
        }
    }
}

fn classify_error(e: &ZenoError) -> u8 {
    match e {
        ZenoError::InvalidInput(_) => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

/// Build all (t, series) sweeps for a config; rows computed per n in
/// parallel, collected in deterministic grid order.
fn run_sweeps(cfg: &ExperimentConfig) -> Result<Vec<(f64, ErrorSeries)>, (u8, String)> {
    let grid = cfg.n_grid.values().map_err(|e| (EXIT_CONFIG, e))?;
    let spec = zeno_core::scenarios::ScenarioSpec::new(
        cfg.scenario.name.clone(),
        cfg.scenario.params.clone(),
        cfg.seed,
    );
    let bound: BoundKind = cfg.bound.into();
    let mut sweeps = Vec::new();
    for t in cfg.t.values() {
        let mut inst = spec.build(t).map_err(|e| {
            (classify_error(&e), format!("scenario `{}` at t = {t}: {e}", spec.name))
        })?;
        if let Some(norm) = cfg.norm_kind {
            inst.norm_kind = norm.into();
        }
        let bound_params = match bound {
            BoundKind::None => None,
            _ => Some(
                zeno_core::zeno::bounds::instance_bound_params(&inst)
                    .map_err(|e| (classify_error(&e), format!("bound constants: {e}")))?,
            ),
        };
        let epsilon = if bound == BoundKind::Uniform {
            zeno_core::zeno::perturbed::instance_epsilon(&inst)
                .map_err(|e| (classify_error(&e), format!("validity radius: {e}")))?
        } else {
            f64::INFINITY
        };
        let rows: Result<Vec<zeno_core::zeno::ErrorEntry>, ZenoError> = grid
            .par_iter()
            .map(|&n| {
                let product = zeno_core::zeno::zeno_product(&inst, n)?;
                let limit = zeno_core::zeno::zeno_limit(&inst, n)?;
                let error = inst.norm_kind.matrix_norm(&(product - limit))?;
                let bound_value = match (&bound, &bound_params) {
                    (BoundKind::Thm1, Some(p)) => {
                        Some(zeno_core::zeno::evaluate_bound_thm1(&p.with_n(n))?)
                    }
                    (BoundKind::Uniform, Some(p)) => {
                        Some(zeno_core::zeno::evaluate_bound_uniform(&p.with_n(n))?)
                    }
                    _ => None,
                };
                Ok(zeno_core::zeno::ErrorEntry {
                    n,
                    error,
                    bound: bound_value,
                    epsilon_exceeded: t / n as f64 > epsilon,
                })
            })
            .collect();
        let entries = rows
            .map_err(|e| (classify_error(&e), format!("sweep `{}` at t = {t}: {e}", inst.label)))?;
        sweeps.push((
            t,
            ErrorSeries { entries, t, instance_label: inst.label.clone(), truncated: inst.truncated },
        ));
    }
    Ok(sweeps)
}

fn series_rows(sweeps: &[(f64, ErrorSeries)]) -> Vec<ReportRow> {
    let mut rows = Vec::new();
    for (t, series) in sweeps {
        for e in &series.entries {
            let mut flags = Vec::new();
            if series.truncated {
                flags.push("truncated");
            }
            if e.epsilon_exceeded {
                flags.push("epsilon-exceeded");
            }
            rows.push(ReportRow {
                n: e.n,
                t: *t,
                error: e.error,
                bound: e.bound,
                slack: e.bound.map(|b| b - e.error),
                flags: flags.join(";"),
            });
        }
    }
    // fixed output order: n, then t
    rows.sort_by(|a, b| a.n.cmp(&b.n).then(a.t.total_cmp(&b.t)));
    rows
}

fn fit_reports(sweeps: &[(f64, ErrorSeries)]) -> Vec<RateFitReport> {
    let mut fits = Vec::new();
    for (t, series) in sweeps {
        let lo = series.entries.first().map(|e| e.n).unwrap_or(1);
        let hi = series.entries.last().map(|e| e.n).unwrap_or(1);
        if let Ok(fit) = rate_fit(series, (lo, hi)) {
            fits.push(RateFitReport::new(&fit, *t, &series.instance_label));
        }
    }
    fits
}

fn cmd_run(path: &std::path::Path) -> u8 {
    let cfg = match ExperimentConfig::load(path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("zeno run: {e}");
            return EXIT_CONFIG;
        }
    };
    let sweeps = match run_sweeps(&cfg) {
        Ok(s) => s,
        Err((code, msg)) => {
            eprintln!("zeno run: {msg}");
            return code;
        }
    };
    let rows = series_rows(&sweeps);
    let fits = fit_reports(&sweeps);
    let payload = match cfg.output.format {
        OutputFormat::Csv => report::rows_to_csv(&rows),
        OutputFormat::Json => {
            serde_json::to_string_pretty(&JsonReport { rows, fits: fit_reports(&sweeps) })
                .expect("report serialization")
                + "\n"
        }
    };
    if let Err(e) = std::fs::write(&cfg.output.path, payload) {
        eprintln!("zeno run: cannot write {}: {e}", cfg.output.path);
        return EXIT_NUMERICAL;
    }
    for fit in &fits {
        println!(
            "rate fit t={}: slope {:.4}, r² {:.4} ({})",
            fit.t, fit.slope, fit.r_squared, fit.instance
        );
    }
    println!("wrote {}", cfg.output.path);
    EXIT_OK
}

fn cmd_rates(path: &std::path::Path) -> u8 {
    let cfg = match ExperimentConfig::load(path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("zeno rates: {e}");
            return EXIT_CONFIG;
        }
    };
    let sweeps = match run_sweeps(&cfg) {
        Ok(s) => s,
        Err((code, msg)) => {
            eprintln!("zeno rates: {msg}");
            return code;
        }
    };
    let mut fits = Vec::new();
    for (t, series) in &sweeps {
        let lo = series.entries.first().map(|e| e.n).unwrap_or(1);
        let hi = series.entries.last().map(|e| e.n).unwrap_or(1);
        match rate_fit(series, (lo, hi)) {
            Ok(fit) => fits.push(RateFitReport::new(&fit, *t, &series.instance_label)),
            Err(e) => {
                eprintln!("zeno rates: fit at t = {t} failed: {e}");
                return EXIT_NUMERICAL;
            }
        }
    }
    let rendered = if fits.len() == 1 {
        serde_json::to_string_pretty(&fits[0]).expect("fit serialization")
    } else {
        serde_json::to_string_pretty(&fits).expect("fit serialization")
    };
    println!("{rendered}");
    EXIT_OK
}

fn cmd_verify(suite: &str, seed: u64, trials: u64) -> u8 {
    match verify::run_suite(suite, seed, trials) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VIOLATION,
        Err(e) => {
            eprintln!("zeno verify: {e}");
            EXIT_CONFIG
        }
    }
}

/// Parse a complex literal like "1", "0.5+0.2i", "-.3-1i".
fn parse_complex(text: &str) -> Result<num_complex::Complex64, String> {
    let s = text.trim().replace(' ', "");
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    if let Ok(re) = s.parse::<f64>() {
        return Ok(num_complex::Complex64::new(re, 0.0));
    }
    if !s.ends_with('i') {
        return Err(format!("cannot parse complex literal `{text}`"));
    }
    let body = &s[..s.len() - 1];
    // split at the sign of the imaginary part (skip a leading sign)
    for (idx, ch) in body.char_indices().skip(1) {
        if (ch == '+' || ch == '-') && !matches!(&body[idx - 1..idx], "e" | "E") {
            let re: f64 = body[..idx].parse().map_err(|_| format!("bad real part in `{text}`"))?;
            let im_text = &body[idx..];
            let im: f64 = if im_text == "+" {
                1.0
            } else if im_text == "-" {
                -1.0
            } else {
                im_text.parse().map_err(|_| format!("bad imaginary part in `{text}`"))?
            };
            return Ok(num_complex::Complex64::new(re, im));
        }
    }
    // pure imaginary
    let im: f64 = if body == "+" || body.is_empty() {
        1.0
    } else if body == "-" {
        -1.0
    } else {
        body.parse().map_err(|_| format!("cannot parse complex literal `{text}`"))?
    };
    Ok(num_complex::Complex64::new(0.0, im))
}

fn cmd_spectral(matrix: &std::path::Path, center: &str, radius: f64, nodes: usize) -> u8 {
    let m = match MatrixFile::load(matrix) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("zeno spectral: {e}");
            return EXIT_CONFIG;
        }
    };
    if !m.is_square() {
        eprintln!("zeno spectral: matrix must be square, got {}x{}", m.nrows(), m.ncols());
        return EXIT_CONFIG;
    }
    let center = match parse_complex(center) {
        Ok(z) => z,
        Err(e) => {
            eprintln!("zeno spectral: {e}");
            return EXIT_CONFIG;
        }
    };
    let contour = match Contour::new(center, radius, nodes) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("zeno spectral: {e}");
            return EXIT_CONFIG;
        }
    };
    let p = match spectral_projection(&m, &contour) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("zeno spectral: {e}");
            return classify_error(&e);
        }
    };
    let idem = zeno_core::linalg::operator_norm(&(&p * &p - &p)).unwrap_or(f64::NAN);
    let comm = zeno_core::linalg::operator_norm(&(&p * &m - &m * &p)).unwrap_or(f64::NAN);
    let rank: f64 = p.diagonal().iter().map(|z| z.re).sum();
    let out = serde_json::json!({
        "projection": MatrixFile::from_matrix(&p),
        "idempotency_defect": idem,
        "commutation_defect": comm,
        "trace": rank,
        "center": {"re": center.re, "im": center.im},
        "radius": radius,
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    EXIT_OK
}

fn cmd_counting(n: u64) -> u8 {
    if n < 1 {
        eprintln!("zeno counting: n must be >= 1");
        return EXIT_CONFIG;
    }
    println!("n,k,j,count");
    for k in 0..=n {
        for j in 0..=zeno_core::zeno::counting::max_transitions(n, k) {
            match zeno_core::zeno::counting_closed_form(j, n, k) {
                Ok(count) => println!("{n},{k},{j},{count}"),
                Err(e) => {
                    eprintln!("zeno counting: {e}");
                    return EXIT_NUMERICAL;
                }
            }
        }
    }
    if n <= 14 {
        // cross-check against enumeration while it is cheap
        for k in 0..=n {
            for j in 0..=n {
                let cf = zeno_core::zeno::counting_closed_form(j, n, k).unwrap();
                let bf = zeno_core::zeno::counting_brute_force(j, n, k).unwrap();
                if cf != bf {
                    eprintln!(
                        "zeno counting: closed form disagrees with enumeration at j={j} k={k}"
                    );
                    return EXIT_VIOLATION;
                }
            }
        }
        eprintln!("closed form verified against enumeration for n = {n}");
    }
    EXIT_OK
}

#[cfg(test)]
mod tests {
    use super::parse_complex;

    #[test]
    fn complex_literals_parse() {
        assert_eq!(parse_complex("1").unwrap(), num_complex::Complex64::new(1.0, 0.0));
        assert_eq!(parse_complex("-0.5").unwrap(), num_complex::Complex64::new(-0.5, 0.0));
        assert_eq!(parse_complex("0.5+0.2i").unwrap(), num_complex::Complex64::new(0.5, 0.2));
        assert_eq!(parse_complex("-0.3-1i").unwrap(), num_complex::Complex64::new(-0.3, -1.0));
        assert_eq!(parse_complex("2i").unwrap(), num_complex::Complex64::new(0.0, 2.0));
        assert_eq!(parse_complex("1+i").unwrap(), num_complex::Complex64::new(1.0, 1.0));
        assert!(parse_complex("abc").is_err());
    }
}
