//! Log-log convergence-rate fitting.

use crate::error::{Error, Result};

/// Ordinary least-squares slope of `log(gap)` against `log(axis)`.
///
/// Callers average repeats per axis value before fitting. All gaps must be
/// positive (a converged-to-zero gap has no log), and a single point fits
/// no line.
pub fn fit_rate(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints(points.len()));
    }
    for &(x, y) in points {
        if !(x > 0.0) {
            return Err(Error::NonPositiveValue(x));
        }
        if !(y > 0.0) {
            return Err(Error::NonPositiveValue(y));
        }
    }
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let mean_x = logs.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = logs.iter().map(|(_, y)| y).sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (x, y) in &logs {
        cov += (x - mean_x) * (y - mean_y);
        var += (x - mean_x) * (x - mean_x);
    }
    if var == 0.0 {
        return Err(Error::NonPositiveValue(0.0));
    }
    Ok(cov / var)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_inverse_sqrt_power_law() {
        let points: Vec<(f64, f64)> = [100.0f64, 400.0, 1600.0, 6400.0]
            .iter()
            .map(|&t| (t, 3.7 / t.sqrt()))
            .collect();
        let slope = fit_rate(&points).unwrap();
        assert!((slope + 0.5).abs() <= 1e-12, "slope {slope}");
    }

    #[test]
    fn constant_gaps_fit_zero() {
        let points = vec![(10.0, 2.0), (100.0, 2.0), (1000.0, 2.0)];
        assert_eq!(fit_rate(&points).unwrap(), 0.0);
    }

    #[test]
    fn degenerate_inputs_error() {
        assert!(matches!(
            fit_rate(&[(10.0, 1.0)]),
            Err(Error::TooFewPoints(1))
        ));
        assert!(matches!(
            fit_rate(&[(10.0, 1.0), (20.0, 0.0)]),
            Err(Error::NonPositiveValue(_))
        ));
        assert!(matches!(
            fit_rate(&[(0.0, 1.0), (20.0, 1.0)]),
            Err(Error::NonPositiveValue(_))
        ));
    }
}
