//! Moment-based temperature estimators, their error-propagation predictions,
//! and Monte Carlo experiments against the Cramér–Rao bound.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ThermoError};
use crate::fisher::fi_gaussian;
use crate::friction::FrictionLaw;
use crate::propagator::{evolve_gaussian, sample_trajectories, BathStage, GaussianMomentumState};
use crate::stats::mean_variance;

/// Known calibration of a measurement: everything but the temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Protocol {
    pub initial: GaussianMomentumState,
    pub law: FrictionLaw,
    /// Exposure time `t`.
    pub duration: f64,
    pub impurity_mass: f64,
}

impl Protocol {
    pub fn new(initial: GaussianMomentumState, law: FrictionLaw, duration: f64, impurity_mass: f64) -> Result<Self> {
        let p = Self {
            initial,
            law,
            duration,
            impurity_mass,
        };
        // validates the shared fields through a probe stage
        p.bath(1.0)?;
        Ok(p)
    }

    /// Exposure of `multiple` relaxation times at the reference temperature.
    pub fn at_relaxation_time(
        initial: GaussianMomentumState,
        law: FrictionLaw,
        impurity_mass: f64,
        reference_temperature: f64,
        multiple: f64,
    ) -> Result<Self> {
        if !(reference_temperature > 0.0) {
            return Err(ThermoError::Domain(reference_temperature));
        }
        Self::new(initial, law, multiple / law.rate(reference_temperature), impurity_mass)
    }

    pub fn bath(&self, temperature: f64) -> Result<BathStage> {
        BathStage::new(temperature, self.law, self.duration, self.impurity_mass)
    }
}

/// Predicted moments of `P` and `P^2` after the exposure.
///
/// `second_moment_zero_mean` and `second_moment_variance_zero_mean` are the
/// zero-mean expressions `M T [..]` and `2 M^2 T^2 [..]^2`; they equal the
/// full Gaussian moments only when the evolved mean vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentPrediction {
    pub mean: f64,
    pub variance: f64,
    pub second_moment: f64,
    pub second_moment_variance: f64,
    pub second_moment_zero_mean: f64,
    pub second_moment_variance_zero_mean: f64,
}

pub fn predict_moments(protocol: &Protocol, temperature: f64) -> Result<MomentPrediction> {
    let evolved = evolve_gaussian(&protocol.initial, &protocol.bath(temperature)?);
    let (mu, s2) = (evolved.mean, evolved.variance);
    Ok(MomentPrediction {
        mean: mu,
        variance: s2,
        second_moment: s2 + mu * mu,
        second_moment_variance: 2.0 * s2 * s2 + 4.0 * mu * mu * s2,
        second_moment_zero_mean: s2,
        second_moment_variance_zero_mean: 2.0 * s2 * s2,
    })
}

/// Error-propagation variance `var(P) / |d_T mean|^2` of a single momentum reading.
pub fn predict_error_momentum(protocol: &Protocol, temperature: f64) -> Result<f64> {
    let bath = protocol.bath(temperature)?;
    if protocol.initial.mean == 0.0 {
        return Err(ThermoError::ZeroSignal);
    }
    if !(protocol.duration > 0.0) {
        return Err(ThermoError::invalid("duration", "momentum readout needs t > 0"));
    }
    let m = protocol.impurity_mass;
    let n = protocol.law.exponent as i32;
    let x = bath.exposure();
    let rel_width = protocol.initial.width() / (2.0 * m * temperature);
    let numerator = m * temperature * (1.0 - (-2.0 * x).exp() * (1.0 - rel_width));
    let signal = protocol.initial.mean * n as f64 * protocol.duration * protocol.law.gamma;
    Ok(numerator / (signal * signal * temperature.powi(2 * n - 2) * (-2.0 * x).exp()))
}

/// Error-propagation variance of a single kinetic-energy (`P^2`) reading,
/// using the zero-mean moment expressions.
pub fn predict_error_kinetic(protocol: &Protocol, temperature: f64) -> Result<f64> {
    let bath = protocol.bath(temperature)?;
    if !(protocol.duration > 0.0) {
        return Err(ThermoError::invalid("duration", "kinetic readout needs t > 0"));
    }
    let m = protocol.impurity_mass;
    let t = temperature;
    let n = protocol.law.exponent as f64;
    let width = protocol.initial.width();
    let x = bath.exposure();
    if x < 300.0 {
        let r = (2.0 * x).exp_m1();
        let num = t * t * (2.0 * r * m * t + width).powi(2);
        let den = 2.0 * (m * t * r + n * x * (2.0 * m * t - width)).powi(2);
        Ok(num / den)
    } else {
        // numerator and denominator divided by R^2
        let inv = (-2.0 * x).exp();
        let num = t * t * (2.0 * m * t + width * inv).powi(2);
        let den = 2.0 * (m * t + n * x * (2.0 * m * t - width) * inv).powi(2);
        Ok(num / den)
    }
}

/// Inverts the decay of the mean: `T = [ln(P0 / mean) / (t gamma)]^(1/n)`.
pub fn estimate_t_from_mean(samples: &[f64], protocol: &Protocol) -> Result<f64> {
    if samples.is_empty() {
        return Err(ThermoError::invalid("samples", "need at least one sample"));
    }
    let p0 = protocol.initial.mean;
    if p0 == 0.0 {
        return Err(ThermoError::ZeroSignal);
    }
    if !(protocol.duration > 0.0) {
        return Err(ThermoError::invalid("duration", "momentum readout needs t > 0"));
    }
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    temperature_from_mean(mean, protocol)
}

fn temperature_from_mean(mean: f64, protocol: &Protocol) -> Result<f64> {
    let ratio = mean / protocol.initial.mean;
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(ThermoError::OutOfRange { ratio });
    }
    let rate = -ratio.ln() / (protocol.duration * protocol.law.gamma);
    Ok(rate.powf(1.0 / protocol.law.exponent as f64))
}

/// Temperature bracket scanned by [`estimate_t_from_energy`].
pub const ENERGY_BRACKET: (f64, f64) = (1e-6, 1e3);
const BRACKET_LIMIT: f64 = 1e12;
const SCAN_POINTS: usize = 256;

/// Expected `P^2` after the exposure at temperature `t`.
fn second_moment_map(protocol: &Protocol, t: f64) -> f64 {
    let x = protocol.duration * protocol.law.rate(t);
    let mu = protocol.initial.mean * (-x).exp();
    protocol.impurity_mass * t * -(-2.0 * x).exp_m1() + protocol.initial.variance * (-2.0 * x).exp() + mu * mu
}

/// Solves `E[P^2](T) = mean(P^2)` for `T` by a bracketed Brent search.
///
/// For a zero initial mean the map is `M T (1 - e^{-2 t gamma T^n}(1 - Delta/(2 M T)))`.
pub fn estimate_t_from_energy(samples: &[f64], protocol: &Protocol) -> Result<f64> {
    if samples.is_empty() {
        return Err(ThermoError::invalid("samples", "need at least one sample"));
    }
    let s = samples.iter().map(|p| p * p).sum::<f64>() / samples.len() as f64;
    temperature_from_second_moment(s, protocol)
}

fn temperature_from_second_moment(s: f64, protocol: &Protocol) -> Result<f64> {
    let (lo, mut hi) = ENERGY_BRACKET;
    let g = |t: f64| second_moment_map(protocol, t) - s;
    while g(hi) < 0.0 {
        hi *= 10.0;
        if hi > BRACKET_LIMIT {
            return Err(ThermoError::NoRoot {
                second_moment: s,
                infimum: f64::NAN,
            });
        }
    }
    let (la, lb) = (lo.ln(), hi.ln());
    let grid: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| (la + (lb - la) * i as f64 / (SCAN_POINTS - 1) as f64).exp())
        .collect();
    let values: Vec<f64> = grid.iter().map(|&t| g(t)).collect();
    let crossings: Vec<usize> = (0..SCAN_POINTS - 1)
        .filter(|&i| (values[i] < 0.0) != (values[i + 1] < 0.0))
        .collect();
    match crossings.as_slice() {
        [] => Err(ThermoError::NoRoot {
            second_moment: s,
            infimum: values.iter().copied().fold(f64::INFINITY, f64::min) + s,
        }),
        [i] => Ok(brent(g, grid[*i], grid[*i + 1], 1e-12 * grid[*i + 1])),
        many => Err(ThermoError::AmbiguousRoot {
            second_moment: s,
            roots: many.len(),
        }),
    }
}

/// Brent's method on a bracket with a sign change.
fn brent<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return b;
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EstimatorKind {
    MomentumMean,
    KineticEnergy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub estimator: EstimatorKind,
    pub protocol: Protocol,
    pub true_temperature: f64,
    pub trials: usize,
    pub samples_per_trial: usize,
    pub seed: u64,
}

pub const MIN_TRIALS: usize = 100;

/// Outcome of a Monte Carlo estimation experiment. Errors are per trial,
/// i.e. for estimates built from `samples_per_trial` readings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationReport {
    pub estimator: EstimatorKind,
    pub true_temperature: f64,
    pub trials: usize,
    pub samples_per_trial: usize,
    pub seed: u64,
    pub successful_trials: usize,
    /// Trials whose sample statistic fell outside the invertible range.
    pub censored_trials: usize,
    pub estimate_mean: f64,
    pub empirical_mse: f64,
    /// Standard error of `empirical_mse`.
    pub empirical_mse_stderr: f64,
    /// Error-propagation prediction divided by `samples_per_trial`.
    pub predicted_error: Option<f64>,
    pub fisher_information: f64,
    /// `1 / (samples_per_trial * F)`.
    pub crb: f64,
    pub mse_over_crb: f64,
    pub mse_over_predicted: Option<f64>,
}

/// Independent 64-bit seed for trial `index` (SplitMix64 finaliser).
fn trial_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Repeats sample-then-estimate `trials` times and compares the empirical
/// mean squared error with the error-propagation prediction and the
/// Cramér–Rao bound. Deterministic for a given seed.
pub fn mc_experiment(config: &McConfig) -> Result<EstimationReport> {
    if config.trials < MIN_TRIALS {
        return Err(ThermoError::invalid("trials", format!("need at least {MIN_TRIALS}, got {}", config.trials)));
    }
    if config.samples_per_trial == 0 {
        return Err(ThermoError::invalid("samples_per_trial", "need at least one sample"));
    }
    let protocol = &config.protocol;
    let t_true = config.true_temperature;
    let bath = protocol.bath(t_true)?;
    if config.estimator == EstimatorKind::MomentumMean && protocol.initial.mean == 0.0 {
        return Err(ThermoError::ZeroSignal);
    }

    let outcomes: Vec<Option<f64>> = (0..config.trials)
        .into_par_iter()
        .map(|i| {
            let samples = sample_trajectories(&protocol.initial, &bath, config.samples_per_trial, trial_seed(config.seed, i as u64))?;
            let estimate = match config.estimator {
                EstimatorKind::MomentumMean => estimate_t_from_mean(&samples, protocol),
                EstimatorKind::KineticEnergy => estimate_t_from_energy(&samples, protocol),
            };
            match estimate {
                Ok(t) => Ok(Some(t)),
                Err(ThermoError::OutOfRange { .. }) | Err(ThermoError::NoRoot { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;

    let estimates: Vec<f64> = outcomes.iter().flatten().copied().collect();
    let successful = estimates.len();
    if successful < 2 {
        return Err(ThermoError::invalid("trials", "fewer than two trials produced an estimate"));
    }
    let sq_errors: Vec<f64> = estimates.iter().map(|t| (t - t_true).powi(2)).collect();
    let (mse, sq_var) = mean_variance(&sq_errors);
    let (estimate_mean, _) = mean_variance(&estimates);

    let k = config.samples_per_trial as f64;
    let fi = fi_gaussian(&protocol.initial, &bath)?.value;
    let crb = 1.0 / (k * fi);
    let predicted = match config.estimator {
        EstimatorKind::MomentumMean => predict_error_momentum(protocol, t_true).ok(),
        EstimatorKind::KineticEnergy => predict_error_kinetic(protocol, t_true).ok(),
    }
    .map(|v| v / k);

    Ok(EstimationReport {
        estimator: config.estimator,
        true_temperature: t_true,
        trials: config.trials,
        samples_per_trial: config.samples_per_trial,
        seed: config.seed,
        successful_trials: successful,
        censored_trials: config.trials - successful,
        estimate_mean,
        empirical_mse: mse,
        empirical_mse_stderr: (sq_var / successful as f64).sqrt(),
        predicted_error: predicted,
        fisher_information: fi,
        crb,
        mse_over_crb: mse / crb,
        mse_over_predicted: predicted.map(|p| mse / p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fisher::{fi_asymptotic, AsymptoticCase};
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    fn law() -> FrictionLaw {
        FrictionLaw::new(1.0, 4).unwrap()
    }

    fn protocol(p0: f64, width: f64, t_ref: f64, multiple: f64) -> Protocol {
        Protocol::at_relaxation_time(GaussianMomentumState::from_width(p0, width).unwrap(), law(), 1.0, t_ref, multiple)
            .unwrap()
    }

    #[test]
    fn stationary_and_initial_moments() {
        let p = protocol(1.0, 0.4, 0.3, 60.0);
        let m = predict_moments(&p, 0.3).unwrap();
        assert!(m.mean.abs() < 1e-20);
        assert_relative_eq!(m.variance, 0.3, max_relative = 1e-12);
        assert_relative_eq!(m.second_moment_zero_mean, 0.3, max_relative = 1e-12);
        assert_relative_eq!(m.second_moment_variance, 2.0 * 0.09, max_relative = 1e-12);
        let p = protocol(1.0, 0.4, 0.3, 0.0);
        let m = predict_moments(&p, 0.3).unwrap();
        assert_eq!(m.mean, 1.0);
        assert_relative_eq!(m.variance, 0.2, max_relative = 1e-15);
    }

    #[test]
    fn momentum_error_at_tau() {
        for t in [0.3, 0.1, 0.02] {
            let p = protocol(1.0, 0.0, t, 1.0);
            let pred = predict_error_momentum(&p, t).unwrap();
            assert_relative_eq!(pred, (E * E - 1.0) * t.powi(3) / 16.0, max_relative = 1e-12);
            let fi = fi_asymptotic(AsymptoticCase::TauDeltaZero, &p.initial, &p.bath(t).unwrap()).unwrap();
            assert_relative_eq!(pred * fi.value, 1.0, max_relative = 1e-12);
        }
        assert_eq!(predict_error_momentum(&protocol(0.0, 0.0, 0.1, 1.0), 0.1), Err(ThermoError::ZeroSignal));
    }

    #[test]
    fn kinetic_error_limits() {
        let t = 0.2;
        let long = predict_error_kinetic(&protocol(0.0, 0.0, t, 50.0), t).unwrap();
        assert_relative_eq!(long, 2.0 * t * t, max_relative = 1e-6);
        let huge = predict_error_kinetic(&protocol(0.0, 0.3, t, 400.0), t).unwrap();
        assert_relative_eq!(huge, 2.0 * t * t, max_relative = 1e-12);
        let tau = predict_error_kinetic(&protocol(0.0, 0.0, t, 1.0), t).unwrap();
        let e2m1 = E * E - 1.0;
        assert_relative_eq!(tau, 2.0 * e2m1 * e2m1 * t * t / (e2m1 + 8.0).powi(2), max_relative = 1e-12);
        assert_relative_eq!(tau / (t * t), 0.394_31, max_relative = 1e-4);
        // broad initial state, cold bath
        let t = 1e-7;
        let broad = predict_error_kinetic(&protocol(0.0, 0.5, t, 1.0), t).unwrap();
        assert_relative_eq!(broad, t * t / 32.0, max_relative = 1e-5);
    }

    #[test]
    fn kinetic_error_is_propagated_variance_of_p2() {
        let p = protocol(0.0, 0.7, 0.4, 0.8);
        let h = 1e-6;
        let d = (predict_moments(&p, 0.4 + h).unwrap().second_moment_zero_mean
            - predict_moments(&p, 0.4 - h).unwrap().second_moment_zero_mean)
            / (2.0 * h);
        let var = predict_moments(&p, 0.4).unwrap().second_moment_variance_zero_mean;
        assert_relative_eq!(predict_error_kinetic(&p, 0.4).unwrap(), var / (d * d), max_relative = 1e-7);
    }

    #[test]
    fn mean_estimator_round_trip_and_range() {
        let p = protocol(1.0, 0.0, 0.1, 1.0);
        for t in [0.05, 0.1, 0.13] {
            let mean = predict_moments(&p, t).unwrap().mean;
            assert_relative_eq!(estimate_t_from_mean(&[mean], &p).unwrap(), t, max_relative = 1e-12);
        }
        assert!(matches!(estimate_t_from_mean(&[1.0], &p), Err(ThermoError::OutOfRange { .. })));
        assert!(matches!(estimate_t_from_mean(&[-0.1], &p), Err(ThermoError::OutOfRange { .. })));
    }

    #[test]
    fn energy_estimator_round_trip() {
        let p = protocol(0.0, 0.0, 0.2, 30.0);
        let t = 0.2;
        let s = (predict_moments(&p, t).unwrap().second_moment).sqrt();
        assert_relative_eq!(estimate_t_from_energy(&[s, -s], &p).unwrap(), t, max_relative = 1e-10);
        // nonzero mean uses the full second moment
        let p = protocol(0.8, 0.2, 0.2, 1.0);
        let s = predict_moments(&p, 1.0).unwrap().second_moment.sqrt();
        assert_relative_eq!(estimate_t_from_energy(&[s], &p).unwrap(), 1.0, max_relative = 1e-10);
    }

    #[test]
    fn energy_estimator_reports_two_roots() {
        // the decaying mean makes E[P^2] dip before the thermal rise
        let p = protocol(0.8, 0.2, 0.2, 1.0);
        let s = predict_moments(&p, 0.25).unwrap().second_moment.sqrt();
        let err = estimate_t_from_energy(&[s], &p).unwrap_err();
        assert!(matches!(err, ThermoError::AmbiguousRoot { roots: 2, .. }), "{err:?}");
    }

    #[test]
    fn energy_estimator_floor() {
        // a broad initial state keeps E[P^2] >= Delta/2 at short exposure
        let p = protocol(0.0, 2.0, 0.2, 1.0);
        let err = estimate_t_from_energy(&[1e-3], &p).unwrap_err();
        assert!(matches!(err, ThermoError::NoRoot { .. }), "{err:?}");
    }

    #[test]
    fn mc_is_deterministic() {
        let cfg = McConfig {
            estimator: EstimatorKind::MomentumMean,
            protocol: protocol(1.0, 0.0, 0.1, 1.0),
            true_temperature: 0.1,
            trials: 200,
            samples_per_trial: 50,
            seed: 11,
        };
        let a = mc_experiment(&cfg).unwrap();
        let b = mc_experiment(&cfg).unwrap();
        assert_eq!(a, b);
        assert!(mc_experiment(&McConfig { trials: 10, ..cfg }).is_err());
    }

    #[test]
    fn brent_finds_cubic_root() {
        let r = brent(|x| x * x * x - 2.0, 0.0, 3.0, 1e-14);
        assert!((r - 2f64.cbrt()).abs() < 1e-13);
    }
}
