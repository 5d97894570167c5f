//! Evolution of the impurity momentum distribution under the linear
//! Fokker–Planck equation, by closed form, spectral expansion, finite
//! differences and exact Ornstein–Uhlenbeck sampling.

mod fdm;
mod grid;
mod sampling;
mod spectral;

pub use fdm::{evolve_fdm, evolve_fdm_with, FdmOptions, FdmOutcome, TimeScheme};
pub use grid::{GridDensity, MomentumGrid, DEFAULT_GRID_POINTS};
pub use sampling::{sample_protocol, sample_trajectories, SAMPLING_CHUNK};
pub use spectral::{evolve_spectral, SpectralExpansion, SPECTRAL_TOLERANCE};

use serde::{Deserialize, Serialize};

use crate::error::{Result, ThermoError};
use crate::friction::FrictionLaw;
use crate::stats::normal_cdf;

/// Gaussian momentum distribution stored as mean and variance.
///
/// `variance == 0` is the sharp state `delta(P - mean)`. The width parameter
/// of a Gaussian written as `exp(-(P - P0)^2 / Delta)` is `Delta = 2 * variance`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianMomentumState {
    pub mean: f64,
    pub variance: f64,
}

impl GaussianMomentumState {
    pub fn new(mean: f64, variance: f64) -> Result<Self> {
        if !mean.is_finite() {
            return Err(ThermoError::invalid("mean", format!("must be finite, got {mean}")));
        }
        if !(variance.is_finite() && variance >= 0.0) {
            return Err(ThermoError::invalid("variance", format!("must be >= 0, got {variance}")));
        }
        Ok(Self { mean, variance })
    }

    /// Sharp initial momentum.
    pub fn delta(mean: f64) -> Self {
        Self { mean, variance: 0.0 }
    }

    /// From mean `P0` and width `Delta` (variance `Delta / 2`).
    pub fn from_width(mean: f64, width: f64) -> Result<Self> {
        Self::new(mean, width / 2.0)
    }

    /// Thermal state `N(0, M T)`.
    pub fn stationary(impurity_mass: f64, temperature: f64) -> Self {
        Self {
            mean: 0.0,
            variance: impurity_mass * temperature,
        }
    }

    pub fn width(&self) -> f64 {
        2.0 * self.variance
    }

    pub fn is_delta(&self) -> bool {
        self.variance == 0.0
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }

    pub fn cdf(&self, momentum: f64) -> f64 {
        if self.is_delta() {
            return if momentum >= self.mean { 1.0 } else { 0.0 };
        }
        normal_cdf((momentum - self.mean) / self.std_dev())
    }
}

/// Contact with one bath: temperature, friction law and exposure time.
///
/// The impurity mass rides along because every propagator needs `M T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathStage {
    pub temperature: f64,
    pub law: FrictionLaw,
    pub duration: f64,
    pub impurity_mass: f64,
}

impl BathStage {
    pub fn new(temperature: f64, law: FrictionLaw, duration: f64, impurity_mass: f64) -> Result<Self> {
        let stage = Self {
            temperature,
            law,
            duration,
            impurity_mass,
        };
        stage.validate()?;
        Ok(stage)
    }

    /// Stage lasting `multiple` relaxation times of its own temperature.
    pub fn in_relaxation_times(temperature: f64, law: FrictionLaw, multiple: f64, impurity_mass: f64) -> Result<Self> {
        if !(temperature > 0.0) {
            return Err(ThermoError::Domain(temperature));
        }
        Self::new(temperature, law, multiple / law.rate(temperature), impurity_mass)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return Err(ThermoError::Domain(self.temperature));
        }
        self.law.validate()?;
        if !(self.duration >= 0.0 && self.duration.is_finite()) {
            return Err(ThermoError::invalid("duration", format!("must be >= 0, got {}", self.duration)));
        }
        if !(self.impurity_mass > 0.0 && self.impurity_mass.is_finite()) {
            return Err(ThermoError::invalid("impurity_mass", format!("must be > 0, got {}", self.impurity_mass)));
        }
        Ok(())
    }

    pub fn relaxation_time(&self) -> f64 {
        1.0 / self.law.rate(self.temperature)
    }

    /// Exposure in units of the relaxation time, `t / tau`.
    pub fn exposure(&self) -> f64 {
        self.duration * self.law.rate(self.temperature)
    }

    /// Stationary variance `M T`.
    pub fn thermal_variance(&self) -> f64 {
        self.impurity_mass * self.temperature
    }

    pub fn with_temperature(&self, temperature: f64) -> Self {
        Self { temperature, ..*self }
    }

    pub fn with_duration(&self, duration: f64) -> Self {
        Self { duration, ..*self }
    }
}

/// Closed-form Gaussian evolution: the mean decays as `exp(-t/tau)` and the
/// variance relaxes to `M T` at rate `2/tau`.
pub fn evolve_gaussian(state: &GaussianMomentumState, bath: &BathStage) -> GaussianMomentumState {
    let x = bath.exposure();
    let decay = (-x).exp();
    let decay2 = (-2.0 * x).exp();
    GaussianMomentumState {
        mean: state.mean * decay,
        variance: bath.thermal_variance() * -(-2.0 * x).exp_m1() + state.variance * decay2,
    }
}

/// Probability density of a non-degenerate Gaussian state.
pub fn density_at(state: &GaussianMomentumState, momentum: f64) -> Result<f64> {
    if state.is_delta() {
        return Err(ThermoError::DeltaState);
    }
    let z = momentum - state.mean;
    Ok((-z * z / (2.0 * state.variance)).exp() / (2.0 * std::f64::consts::PI * state.variance).sqrt())
}

/// Passes the state through each bath in turn.
pub fn compose_baths(state: &GaussianMomentumState, stages: &[BathStage]) -> Result<GaussianMomentumState> {
    if stages.is_empty() {
        return Err(ThermoError::invalid("stages", "need at least one bath stage"));
    }
    for s in stages {
        s.validate()?;
    }
    Ok(stages.iter().fold(*state, |acc, stage| evolve_gaussian(&acc, stage)))
}
