//! Report rows and their CSV/JSON encodings, plus the matrix file format.
//!
//! CSV numbers use the shortest round-trip representation of f64 so that
//! identical runs produce byte-identical files.

use serde::{Deserialize, Serialize};
use zeno_core::linalg::CMatrix;
use zeno_core::zeno::RateFit;

/// One output row of an experiment sweep.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub n: u64,
    pub t: f64,
    pub error: f64,
    pub bound: Option<f64>,
    pub slack: Option<f64>,
    pub flags: String,
}

pub const CSV_HEADER: &str = "n,t,error,bound,slack,flags";

/// Shortest round-trip decimal form of a double.
fn fmt_f64(v: f64) -> String {
    let mut buffer = ryu::Buffer::new();
    buffer.format(v).to_string()
}

impl ReportRow {
    pub fn to_csv_line(&self) -> String {
        let bound = self.bound.map(fmt_f64).unwrap_or_default();
        let slack = self.slack.map(fmt_f64).unwrap_or_default();
        format!(
            "{},{},{},{},{},{}",
            self.n,
            fmt_f64(self.t),
            fmt_f64(self.error),
            bound,
            slack,
            self.flags
        )
    }
}

/// Render rows as a CSV document with the fixed header.
pub fn rows_to_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv_line());
        out.push('\n');
    }
    out
}

#[derive(Debug, Serialize)]
pub struct RateFitReport {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (u64, u64),
    pub t: f64,
    pub instance: String,
}

impl RateFitReport {
    pub fn new(fit: &RateFit, t: f64, instance: &str) -> Self {
        Self {
            slope: fit.slope,
            intercept: fit.intercept,
            r_squared: fit.r_squared,
            window: fit.window,
            t,
            instance: instance.to_string(),
        }
    }
}

/// Full JSON report: rows plus per-t rate fits.
#[derive(Debug, Serialize)]
pub struct JsonReport {
    pub rows: Vec<ReportRow>,
    pub fits: Vec<RateFitReport>,
}

/// On-disk matrix format: row-major flat arrays of real and imaginary
/// parts.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixFile {
    pub fn load(path: &std::path::Path) -> Result<CMatrix, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read matrix file {}: {e}", path.display()))?;
        let file: MatrixFile =
            serde_json::from_str(&text).map_err(|e| format!("invalid matrix file: {e}"))?;
        file.to_matrix()
    }

    pub fn to_matrix(&self) -> Result<CMatrix, String> {
        if self.rows == 0 || self.cols == 0 {
            return Err("matrix dimensions must be positive".into());
        }
        if self.re.len() != self.rows * self.cols || self.im.len() != self.rows * self.cols {
            return Err(format!(
                "matrix file length mismatch: rows*cols = {}, re = {}, im = {}",
                self.rows * self.cols,
                self.re.len(),
                self.im.len()
            ));
        }
        // row-major on disk, column-major in memory
        Ok(CMatrix::from_fn(self.rows, self.cols, |i, j| {
            let k = i * self.cols + j;
            num_complex::Complex64::new(self.re[k], self.im[k])
        }))
    }

    pub fn from_matrix(m: &CMatrix) -> Self {
        let mut re = Vec::with_capacity(m.nrows() * m.ncols());
        let mut im = Vec::with_capacity(m.nrows() * m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                re.push(m[(i, j)].re);
                im.push(m[(i, j)].im);
            }
        }
        Self { rows: m.nrows(), cols: m.ncols(), re, im }
    }
}
