//! Temperature Fisher information of the impurity momentum distribution.
//!
//! The evolved distribution is Gaussian with mean `mu(T)` and variance
//! `s2(T)`, so several independent routes are available: quadrature of
//! `(d_T f)^2 / f` with finite-difference derivatives ([`fi_numeric`]), the
//! Gaussian-family identity ([`fi_gaussian`]), a fully expanded closed form
//! ([`fi_general_closed`]) and low-temperature limits ([`fi_asymptotic`]).
//! Derivatives are taken at fixed exposure time `t`; "`t = tau`" means
//! `t = tau(T_true)` held fixed while differentiating.

mod asymptotic;
mod matrix;
mod single;

pub use asymptotic::{fi_asymptotic, AsymptoticCase};
pub use matrix::{crb_trace_bound, fisher_matrix_two_bath, fisher_matrix_two_bath_numeric, trace_bound_limit, FisherMatrix2};
pub use single::{fi_gaussian, fi_general_closed, fi_numeric, gaussian_family, GaussianFamily, NumericFisherOptions};

use serde::{Deserialize, Serialize};

use crate::error::{Result, ThermoError};
use crate::propagator::{BathStage, GaussianMomentumState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FisherMethod {
    Quadrature,
    GaussianClosed,
    GeneralClosed,
    Asymptotic { case: AsymptoticCase },
}

/// Parameters a Fisher information value was computed for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherInputs {
    pub temperature: f64,
    pub duration: f64,
    pub initial_mean: f64,
    /// Initial width `Delta = 2 * variance`.
    pub initial_width: f64,
    pub impurity_mass: f64,
    pub gamma: f64,
    pub exponent: u32,
}

impl FisherInputs {
    pub fn new(state: &GaussianMomentumState, bath: &BathStage) -> Self {
        Self {
            temperature: bath.temperature,
            duration: bath.duration,
            initial_mean: state.mean,
            initial_width: state.width(),
            impurity_mass: bath.impurity_mass,
            gamma: bath.law.gamma,
            exponent: bath.law.exponent,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FisherReport {
    pub value: f64,
    pub method: FisherMethod,
    pub inputs: FisherInputs,
    /// Relative difference to the Gaussian-family value, when cross-checked.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<f64>,
    /// How far inside its validity region an asymptotic formula was used
    /// (ratio of the "large" to the "small" side; >= 10 is comfortable).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validity_margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl FisherReport {
    fn new(value: f64, method: FisherMethod, inputs: FisherInputs) -> Self {
        Self {
            value,
            method,
            inputs,
            discrepancy: None,
            validity_margin: None,
            warnings: Vec::new(),
        }
    }
}

/// Cramér–Rao lower bound `1 / (N F)` on the temperature variance.
pub fn cramer_rao(fi: &FisherReport, repetitions: u64) -> Result<f64> {
    if repetitions == 0 {
        return Err(ThermoError::invalid("repetitions", "need N >= 1"));
    }
    if !(fi.value > 0.0) {
        return Err(ThermoError::ZeroInformation);
    }
    Ok(1.0 / (repetitions as f64 * fi.value))
}

pub fn relative_difference(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::friction::FrictionLaw;

    fn report(value: f64) -> FisherReport {
        let bath = BathStage::new(1.0, FrictionLaw::new(1.0, 4).unwrap(), 1.0, 1.0).unwrap();
        FisherReport::new(value, FisherMethod::GaussianClosed, FisherInputs::new(&GaussianMomentumState::delta(1.0), &bath))
    }

    #[test]
    fn cramer_rao_values() {
        assert_eq!(cramer_rao(&report(4.0), 1).unwrap(), 0.25);
        assert!((cramer_rao(&report(4.0), 100).unwrap() - 0.0025).abs() < 1e-18);
        assert_eq!(cramer_rao(&report(0.0), 1), Err(ThermoError::ZeroInformation));
    }

    #[test]
    fn report_serializes_with_method_tag() {
        let json = serde_json::to_value(report(2.0)).unwrap();
        assert_eq!(json["method"]["kind"], "gaussian-closed");
        assert_eq!(json["inputs"]["exponent"], 4);
        assert!(json.get("discrepancy").is_none());
    }
}
