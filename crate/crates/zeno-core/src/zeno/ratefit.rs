//! Log-log least-squares rate fitting for error series.

use super::ErrorSeries;
use crate::error::{Result, ZenoError};

/// Errors at or below this are double-precision noise and excluded from fits.
pub const FIT_ERROR_FLOOR: f64 = 1e-12;

/// Minimum usable points for a fit.
pub const FIT_MIN_POINTS: usize = 4;

/// A fitted power law error(n) ≈ e^intercept · n^slope.
#[derive(Debug, Clone, Copy)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (u64, u64),
}

/// Least-squares line on (log n, log error) over entries inside the window
/// whose error exceeds the noise floor.
pub fn rate_fit(series: &ErrorSeries, window: (u64, u64)) -> Result<RateFit> {
    let pts: Vec<(f64, f64)> = series
        .entries
        .iter()
        .filter(|e| e.n >= window.0 && e.n <= window.1 && e.error > FIT_ERROR_FLOOR)
        .map(|e| ((e.n as f64).ln(), e.error.ln()))
        .collect();
    if pts.len() < FIT_MIN_POINTS {
        return Err(ZenoError::TooFewPoints { got: pts.len(), need: FIT_MIN_POINTS });
    }
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return Err(ZenoError::InvalidInput("degenerate fit: all n coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = pts
        .iter()
        .map(|p| (p.1 - (intercept + slope * p.0)).powi(2))
        .sum();
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(RateFit { slope, intercept, r_squared, window })
}

/// Convenience: build a series from raw (n, error) pairs, for fitting
/// synthetic data and external measurements.
pub fn series_from_pairs(pairs: &[(u64, f64)], t: f64, label: &str) -> ErrorSeries {
    ErrorSeries {
        entries: pairs
            .iter()
            .map(|&(n, error)| super::ErrorEntry { n, error, bound: None, epsilon_exceeded: false })
            .collect(),
        t,
        instance_label: label.to_string(),
        truncated: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_inverse_power_law() {
        let pairs: Vec<(u64, f64)> = (1..=64).map(|n| (n, 1.0 / n as f64)).collect();
        let fit = rate_fit(&series_from_pairs(&pairs, 1.0, "synthetic"), (1, 64)).unwrap();
        assert!((fit.slope + 1.0).abs() < 1e-10);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_inverse_sqrt_law() {
        let pairs: Vec<(u64, f64)> = (1..=64).map(|n| (n, 1.0 / (n as f64).sqrt())).collect();
        let fit = rate_fit(&series_from_pairs(&pairs, 1.0, "synthetic"), (1, 64)).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-10);
    }

    #[test]
    fn window_restricts_points() {
        let pairs: Vec<(u64, f64)> = (1..=64).map(|n| (n, 1.0 / n as f64)).collect();
        let fit = rate_fit(&series_from_pairs(&pairs, 1.0, "synthetic"), (8, 32)).unwrap();
        assert_eq!(fit.window, (8, 32));
        assert!((fit.slope + 1.0).abs() < 1e-10);
    }

    #[test]
    fn too_few_points_is_an_error() {
        let pairs = vec![(1u64, 0.5), (2, 0.25), (4, 0.125)];
        let err = rate_fit(&series_from_pairs(&pairs, 1.0, "synthetic"), (1, 4)).unwrap_err();
        assert!(matches!(err, ZenoError::TooFewPoints { got: 3, need: 4 }));
    }

    #[test]
    fn noise_floor_points_are_dropped() {
        let mut pairs: Vec<(u64, f64)> = (1..=8).map(|n| (n, 1.0 / n as f64)).collect();
        pairs.extend((9..=20).map(|n| (n, 1e-15)));
        let fit = rate_fit(&series_from_pairs(&pairs, 1.0, "synthetic"), (1, 20)).unwrap();
        assert!((fit.slope + 1.0).abs() < 1e-10, "slope {}", fit.slope);
    }
}
