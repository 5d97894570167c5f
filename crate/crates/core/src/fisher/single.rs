use crate::error::{Result, ThermoError};
use crate::propagator::{density_at, evolve_gaussian, BathStage, GaussianMomentumState};
use crate::quadrature::{integrate, QuadratureOptions};

use super::{relative_difference, FisherInputs, FisherMethod, FisherReport};

/// Mean and variance of the evolved state and their temperature derivatives
/// at fixed exposure time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianFamily {
    pub mean: f64,
    pub variance: f64,
    pub d_mean: f64,
    pub d_variance: f64,
}

impl GaussianFamily {
    /// `(d mu)^2 / s2 + (d s2)^2 / (2 s2^2)`.
    pub fn fisher_information(&self) -> f64 {
        self.mean_information() + self.variance_information()
    }

    pub fn mean_information(&self) -> f64 {
        self.d_mean * self.d_mean / self.variance
    }

    pub fn variance_information(&self) -> f64 {
        self.d_variance * self.d_variance / (2.0 * self.variance * self.variance)
    }
}

/// `mu = P0 e^{-x}`, `s2 = M T (1 - e^{-2x}) + V e^{-2x}` with `x = t gamma T^n`.
pub fn gaussian_family(state: &GaussianMomentumState, bath: &BathStage) -> GaussianFamily {
    let t = bath.temperature;
    let m = bath.impurity_mass;
    let x = bath.exposure();
    let dx = bath.duration * bath.law.rate_derivative(t);
    let e1 = (-x).exp();
    let e2 = (-2.0 * x).exp();
    GaussianFamily {
        mean: state.mean * e1,
        variance: m * t * -(-2.0 * x).exp_m1() + state.variance * e2,
        d_mean: -state.mean * dx * e1,
        d_variance: m * -(-2.0 * x).exp_m1() + 2.0 * dx * (m * t - state.variance) * e2,
    }
}

fn check_evolved(state: &GaussianMomentumState, bath: &BathStage) -> Result<()> {
    bath.validate()?;
    if evolve_gaussian(state, bath).variance <= 0.0 {
        return Err(ThermoError::invalid(
            "state",
            "evolved variance is zero (sharp state with no exposure)",
        ));
    }
    Ok(())
}

/// Fisher information from the Gaussian-family identity with analytic derivatives.
pub fn fi_gaussian(state: &GaussianMomentumState, bath: &BathStage) -> Result<FisherReport> {
    check_evolved(state, bath)?;
    let value = gaussian_family(state, bath).fisher_information();
    Ok(FisherReport::new(value, FisherMethod::GaussianClosed, FisherInputs::new(state, bath)))
}

/// The expanded general closed form with `R = exp(2 t gamma T^n) - 1`,
/// cross-checked against [`fi_gaussian`].
pub fn fi_general_closed(state: &GaussianMomentumState, bath: &BathStage) -> Result<FisherReport> {
    check_evolved(state, bath)?;
    let t = bath.temperature;
    let m = bath.impurity_mass;
    let g = bath.law.gamma;
    let n = bath.law.exponent as f64;
    let time = bath.duration;
    let p0 = state.mean;
    let width = state.width();
    let x = bath.exposure();
    let tn = t.powi(bath.law.exponent as i32);
    let value = if x < 100.0 {
        let r = (2.0 * x).exp_m1();
        let bracket = (p0 * p0 - 4.0 * m * t) * width + 2.0 * m * t * (r * p0 * p0 + 2.0 * m * t) + width * width;
        let braces = n * n * time * time * tn * tn * bracket
            + (r * m * t / g).powi(2)
            + 2.0 * n * m * r * time * tn * t * (2.0 * m * t - width) / g;
        2.0 * g * g * braces / (t * (2.0 * r * m * t + width)).powi(2)
    } else {
        // same expression divided through by R^2 to avoid overflow
        let inv_r = 1.0 / (2.0 * x).exp_m1();
        let bracket = ((p0 * p0 - 4.0 * m * t) * width + 4.0 * m * m * t * t + width * width) * inv_r * inv_r
            + 2.0 * m * t * p0 * p0 * inv_r;
        let braces = n * n * time * time * tn * tn * bracket
            + (m * t / g).powi(2)
            + 2.0 * n * m * time * tn * t * (2.0 * m * t - width) / g * inv_r;
        2.0 * g * g * braces / (t * (2.0 * m * t + width * inv_r)).powi(2)
    };
    let reference = gaussian_family(state, bath).fisher_information();
    let mut report = FisherReport::new(value, FisherMethod::GeneralClosed, FisherInputs::new(state, bath));
    report.discrepancy = Some(relative_difference(value, reference));
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericFisherOptions {
    /// Finite-difference step relative to `T`.
    pub relative_step: f64,
    /// Half-width of the integration window in standard deviations.
    pub window: f64,
    pub quadrature: QuadratureOptions,
}

impl Default for NumericFisherOptions {
    fn default() -> Self {
        Self {
            relative_step: 1e-4,
            window: 12.0,
            quadrature: QuadratureOptions {
                rel_tol: 1e-10,
                abs_tol: 0.0,
                max_intervals: 4000,
            },
        }
    }
}

/// Evolved density at temperature `temp` for fixed initial state and exposure time.
fn density_at_temperature(state: &GaussianMomentumState, bath: &BathStage, temp: f64, p: f64) -> f64 {
    let evolved = evolve_gaussian(state, &bath.with_temperature(temp));
    density_at(&evolved, p).unwrap_or(0.0)
}

/// Fisher information by quadrature of `(d_T f)^2 / f`, with `d_T f` from
/// Richardson-extrapolated central differences.
pub fn fi_numeric(state: &GaussianMomentumState, bath: &BathStage, opts: NumericFisherOptions) -> Result<FisherReport> {
    check_evolved(state, bath)?;
    let t = bath.temperature;
    let h = opts.relative_step * t;
    if t + h == t || t - 2.0 * h <= 0.0 {
        return Err(ThermoError::StepUnderflow { temperature: t });
    }
    let center = evolve_gaussian(state, bath);
    let sd = center.std_dev();
    let integrand = |p: f64| {
        let f = density_at(&center, p).unwrap_or(0.0);
        if f <= 0.0 {
            return 0.0;
        }
        let at = |dt: f64| density_at_temperature(state, bath, t + dt, p);
        let d1 = (at(h) - at(-h)) / (2.0 * h);
        let d2 = (at(2.0 * h) - at(-2.0 * h)) / (4.0 * h);
        let df = (4.0 * d1 - d2) / 3.0;
        df * df / f
    };
    let lo = center.mean - opts.window * sd;
    let hi = center.mean + opts.window * sd;
    // split at the mean so both lobes of the integrand are resolved from the start
    let left = integrate(integrand, lo, center.mean, opts.quadrature)?;
    let right = integrate(integrand, center.mean, hi, opts.quadrature)?;
    let value = left.value + right.value;
    let mut report = FisherReport::new(value, FisherMethod::Quadrature, FisherInputs::new(state, bath));
    report.discrepancy = Some(relative_difference(value, gaussian_family(state, bath).fisher_information()));
    Ok(report)
}
