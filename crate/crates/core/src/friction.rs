//! Friction laws, diffusion and the quasiparticle-scattering friction integral.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Result, ThermoError};
use crate::fit::{fit_power_law, PowerLawFit};
use crate::params::{PhysicalParams, Regime};
use crate::quadrature::{integrate, QuadratureOptions};

/// Where a friction law came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LawProvenance {
    Asymptotic { regime: Regime },
    Fitted { fitted_exponent: f64 },
    Given,
}

/// Linear friction law `F = -gamma * P * T^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrictionLaw {
    pub gamma: f64,
    pub exponent: u32,
    pub provenance: LawProvenance,
}

impl FrictionLaw {
    pub fn new(gamma: f64, exponent: u32) -> Result<Self> {
        let law = Self {
            gamma,
            exponent,
            provenance: LawProvenance::Given,
        };
        law.validate()?;
        Ok(law)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(ThermoError::invalid("gamma", format!("must be > 0, got {}", self.gamma)));
        }
        if self.exponent != 2 && self.exponent != 4 {
            return Err(ThermoError::invalid("exponent", format!("must be 2 or 4, got {}", self.exponent)));
        }
        Ok(())
    }

    /// Momentum decay rate `gamma * T^n = 1/tau`.
    pub fn rate(&self, temperature: f64) -> f64 {
        self.gamma * temperature.powi(self.exponent as i32)
    }

    /// `d(rate)/dT`.
    pub fn rate_derivative(&self, temperature: f64) -> f64 {
        let n = self.exponent as i32;
        self.gamma * n as f64 * temperature.powi(n - 1)
    }
}

/// Friction coefficient and exponent of an asymptotic regime.
pub fn gamma_coefficient(params: &PhysicalParams, regime: Regime) -> FrictionLaw {
    let PhysicalParams {
        impurity_mass: big_m,
        boson_mass: m,
        sound_velocity: v,
        coupling: g,
        hbar,
        kb,
    } = *params;
    let weak = 2.0 * PI.powi(3) * g * g / (15.0 * hbar.powi(3) * m * m * big_m * v.powi(8));
    let gamma = match regime {
        Regime::StrongHigh => 2.0 * PI / (3.0 * hbar * big_m * v * v),
        Regime::StrongLow => 4.0 * weak,
        Regime::Weak => weak,
    };
    let exponent = regime.exponent();
    FrictionLaw {
        // temperatures enter as kb*T
        gamma: gamma * kb.powi(exponent as i32),
        exponent,
        provenance: LawProvenance::Asymptotic { regime },
    }
}

/// `tau = 1 / (gamma T^n)`.
pub fn relaxation_time(law: &FrictionLaw, temperature: f64) -> Result<f64> {
    if !(temperature > 0.0) {
        return Err(ThermoError::Domain(temperature));
    }
    Ok(1.0 / law.rate(temperature))
}

/// `D = 2 gamma M T^(n+1)` (fluctuation–dissipation partner of the friction law).
pub fn diffusion_coefficient(law: &FrictionLaw, temperature: f64, impurity_mass: f64) -> f64 {
    2.0 * law.gamma * impurity_mass * temperature.powi(law.exponent as i32 + 1)
}

pub fn friction_force_asymptotic(momentum: f64, law: &FrictionLaw, temperature: f64) -> f64 {
    -law.gamma * momentum * temperature.powi(law.exponent as i32)
}

/// Quasiparticle reflection probability `|r(k)|^2`, `k` in units of `m v / hbar`.
#[derive(Clone)]
pub enum ReflectionModel {
    /// Perfect reflection.
    Unit,
    /// `min(c k^2, 1)`.
    Quadratic { c: f64 },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for ReflectionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReflectionModel::Unit => write!(f, "Unit"),
            ReflectionModel::Quadratic { c } => write!(f, "Quadratic {{ c: {c} }}"),
            ReflectionModel::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl ReflectionModel {
    /// Quadratic model whose low-temperature friction reproduces the asymptotic
    /// coefficient of a T^4 regime: `c = G~^2/4` (weak) or `c = G~^2` (strong-low).
    pub fn calibrated_quadratic(params: &PhysicalParams, regime: Regime) -> Result<Self> {
        let g = params.reduced_coupling();
        match regime {
            Regime::Weak => Ok(ReflectionModel::Quadratic { c: g * g / 4.0 }),
            Regime::StrongLow => Ok(ReflectionModel::Quadratic { c: g * g }),
            Regime::StrongHigh => Ok(ReflectionModel::Unit),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let ReflectionModel::Quadratic { c } = self {
            if !(c.is_finite() && *c >= 0.0) {
                return Err(ThermoError::invalid("reflection.c", format!("must be >= 0, got {c}")));
            }
        }
        Ok(())
    }

    pub fn probability(&self, k: f64) -> f64 {
        match self {
            ReflectionModel::Unit => 1.0,
            ReflectionModel::Quadratic { c } => (c * k * k).min(1.0),
            ReflectionModel::Custom(f) => f(k),
        }
    }
}

/// Argument of `sinh` beyond which the integrand is dropped; `4 e^{-2a}` is
/// below 1e-34 there.
const SINH_CUTOFF: f64 = 40.0;

/// Upper wavenumber limit of the friction integral at reduced temperature `t`.
pub fn friction_cutoff(reduced_t: f64) -> f64 {
    let s = 4.0 * SINH_CUTOFF * reduced_t;
    (-2.0 + (4.0 + s * s).sqrt()).sqrt()
}

/// Integrand of the friction integral (without prefactor) at wavenumber `k`.
fn friction_integrand(k: f64, reduced_t: f64, refl: &ReflectionModel) -> f64 {
    let r2 = refl.probability(k);
    if k == 0.0 {
        // k^2 / sinh^2(k/(2T~)) -> 4 T~^2
        return 4.0 * reduced_t * reduced_t * r2;
    }
    let root = (4.0 + k * k).sqrt();
    let a = k * root / (4.0 * reduced_t);
    let e = (-2.0 * a).exp();
    let inv_sinh2 = 4.0 * e / (-(-2.0 * a).exp_m1()).powi(2);
    k * k * r2 * (2.0 + k * k) * inv_sinh2 / root
}

/// Friction force on an impurity of momentum `momentum` from quasiparticle
/// scattering, by adaptive quadrature of the k-integral.
pub fn friction_force_integral(
    momentum: f64,
    params: &PhysicalParams,
    refl: &ReflectionModel,
    temperature: f64,
    opts: QuadratureOptions,
) -> Result<f64> {
    params.validate()?;
    refl.validate()?;
    if !(temperature > 0.0) {
        return Err(ThermoError::Domain(temperature));
    }
    if momentum == 0.0 {
        return Ok(0.0);
    }
    let t = params.reduced_temperature(temperature);
    let kmax = friction_cutoff(t);
    if let ReflectionModel::Custom(f) = refl {
        for i in 0..=64 {
            let k = kmax * i as f64 / 64.0;
            let r2 = f(k);
            if !(0.0..=1.0).contains(&r2) {
                return Err(ThermoError::invalid("reflection", format!("|r({k})|^2 = {r2} outside [0, 1]")));
            }
        }
    }
    let integral = integrate(|k| friction_integrand(k, t, refl), 0.0, kmax, opts)?;
    let PhysicalParams {
        impurity_mass: big_m,
        boson_mass: m,
        sound_velocity: v,
        hbar,
        ..
    } = *params;
    let prefactor = m * m * v * v * momentum / (2.0 * PI * hbar * big_m * t);
    Ok(-prefactor * integral.value)
}

/// Power-law fit of the friction coefficient `-F/P` against temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrictionFit {
    pub fit: PowerLawFit,
    /// Nearest admissible law when the fitted exponent lies within 0.1 of 2 or 4.
    pub law: Option<FrictionLaw>,
}

/// Fits `-F/P = gamma T^n` to the friction integral over `temperatures`.
pub fn fit_friction_law(
    params: &PhysicalParams,
    refl: &ReflectionModel,
    temperatures: &[f64],
    opts: QuadratureOptions,
) -> Result<FrictionFit> {
    let coefficients = temperatures
        .iter()
        .map(|&t| friction_force_integral(1.0, params, refl, t, opts).map(|f| -f))
        .collect::<Result<Vec<_>>>()?;
    let fit = fit_power_law(temperatures, &coefficients)?;
    let law = [2u32, 4].into_iter().find(|&n| (fit.exponent - n as f64).abs() < 0.1).map(|n| FrictionLaw {
        gamma: fit.prefactor,
        exponent: n,
        provenance: LawProvenance::Fitted {
            fitted_exponent: fit.exponent,
        },
    });
    Ok(FrictionFit { fit, law })
}
