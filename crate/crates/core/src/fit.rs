//! Least-squares power-law fits on log-log axes.

use serde::{Deserialize, Serialize};

use crate::error::{Result, ThermoError};

/// `y = prefactor * x^exponent`, fitted by ordinary least squares on `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    /// Largest absolute residual in `ln y`.
    pub max_residual: f64,
}

pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<PowerLawFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(ThermoError::invalid("fit", "need at least two (x, y) pairs of equal length"));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(ThermoError::invalid("fit", "log-log fit needs strictly positive finite data"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(ThermoError::invalid("fit", "abscissae are all equal"));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let max_residual = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - intercept - exponent * x).abs())
        .fold(0.0, f64::max);
    Ok(PowerLawFit {
        exponent,
        prefactor: intercept.exp(),
        max_residual,
    })
}

/// `n` points log-spaced between `a` and `b` inclusive.
pub fn log_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let (la, lb) = (a.ln(), b.ln());
            (0..n).map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp()).collect()
        }
    }
}

/// `n` points evenly spaced between `a` and `b` inclusive.
pub fn lin_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_power_law() {
        let xs = log_space(1e-3, 1e-1, 17);
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 * x.powf(-3.0)).collect();
        let fit = fit_power_law(&xs, &ys).unwrap();
        assert!((fit.exponent + 3.0).abs() < 1e-12);
        assert!((fit.prefactor / 2.5 - 1.0).abs() < 1e-10);
        assert!(fit.max_residual < 1e-10);
    }

    #[test]
    fn rejects_nonpositive_data() {
        assert!(fit_power_law(&[1.0, 2.0], &[1.0, -1.0]).is_err());
        assert!(fit_power_law(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn spacing_endpoints() {
        let v = log_space(1e-3, 1e-1, 3);
        assert!((v[1] - 1e-2).abs() < 1e-15);
        assert_eq!(lin_space(0.0, 1.0, 5)[4], 1.0);
    }
}
