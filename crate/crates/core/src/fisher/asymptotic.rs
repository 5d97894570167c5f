use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::propagator::{BathStage, GaussianMomentumState};

use super::{FisherInputs, FisherMethod, FisherReport};

/// Limiting forms of the Fisher information.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AsymptoticCase {
    /// Short exposure `t gamma T^n << 1`, broad initial state.
    LowTDeltaPos,
    /// Short exposure, sharp initial momentum.
    LowTDeltaZero,
    /// `t = tau`, `T -> 0`, broad initial state: `~ T^-2`.
    TauDeltaPos,
    /// `t = tau`, `T -> 0`, sharp initial momentum `P0 != 0`: `~ T^-3`.
    TauDeltaZero,
    /// `t = tau`, sharp initial momentum `P0 = 0`.
    TauP0Zero,
}

impl AsymptoticCase {
    pub const ALL: [AsymptoticCase; 5] = [
        AsymptoticCase::LowTDeltaPos,
        AsymptoticCase::LowTDeltaZero,
        AsymptoticCase::TauDeltaPos,
        AsymptoticCase::TauDeltaZero,
        AsymptoticCase::TauP0Zero,
    ];

    fn at_relaxation_time(self) -> bool {
        matches!(self, AsymptoticCase::TauDeltaPos | AsymptoticCase::TauDeltaZero | AsymptoticCase::TauP0Zero)
    }
}

/// Evaluates a limiting formula and reports how well its assumptions hold.
///
/// The `Tau*` cases assume `t = tau(T)` regardless of `bath.duration`; a
/// warning is attached when the bath exposure differs from one relaxation
/// time. Validity problems never fail the call.
pub fn fi_asymptotic(case: AsymptoticCase, state: &GaussianMomentumState, bath: &BathStage) -> Result<FisherReport> {
    bath.validate()?;
    let t = bath.temperature;
    let m = bath.impurity_mass;
    let g = bath.law.gamma;
    let n = bath.law.exponent as f64;
    let time = bath.duration;
    let p0 = state.mean;
    let width = state.width();
    let x = bath.exposure();
    let mt = m * t;
    let e2m1 = E * E - 1.0;
    let eq14 = n * n * p0 * p0 / (m * t.powi(3) * e2m1);
    let eq15 = (2.0 * n + e2m1).powi(2) / (2.0 * t * t * e2m1 * e2m1);

    let (value, margin) = match case {
        AsymptoticCase::LowTDeltaPos => (
            2.0 * (n * time * g).powi(2) * t.powf(2.0 * n - 2.0) * (p0 * p0 + width) / width,
            (1.0 / x).min(state.variance / mt),
        ),
        AsymptoticCase::LowTDeltaZero => (
            // the mean term carries the friction coefficient; it reduces to
            // n^2 P0^2 T^(n-3) t / (2M) for gamma = 1
            (1.0 + n).powi(2) / (2.0 * t * t) + n * n * p0 * p0 * t.powf(n - 3.0) * time * g / (2.0 * m),
            (1.0 / x).min(if state.variance > 0.0 { 2.0 * mt * x / state.variance } else { f64::INFINITY }),
        ),
        AsymptoticCase::TauDeltaPos => (2.0 * n * n * (p0 * p0 + width) / (t * t * width), state.variance / mt),
        AsymptoticCase::TauDeltaZero => (eq14, eq14 / eq15),
        AsymptoticCase::TauP0Zero => (eq15, if p0 == 0.0 { f64::INFINITY } else { eq15 / eq14 }),
    };

    let mut report = FisherReport::new(value, FisherMethod::Asymptotic { case }, FisherInputs::new(state, bath));
    report.validity_margin = Some(margin);
    if margin < 10.0 {
        report
            .warnings
            .push(format!("{case:?} used outside its validity region (margin {margin:.3e} < 10)"));
    }
    if case.at_relaxation_time() && (x - 1.0).abs() > 1e-9 {
        report
            .warnings
            .push(format!("{case:?} assumes t = tau but the bath exposure is {x} tau"));
    }
    if matches!(case, AsymptoticCase::LowTDeltaPos | AsymptoticCase::TauDeltaPos) && width == 0.0 {
        report.warnings.push(format!("{case:?} requires Delta > 0"));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fisher::fi_gaussian;
    use crate::friction::FrictionLaw;
    use approx::assert_relative_eq;

    fn bath(t: f64, exposure: f64) -> BathStage {
        BathStage::in_relaxation_times(t, FrictionLaw::new(1.0, 4).unwrap(), exposure, 1.0).unwrap()
    }

    #[test]
    fn short_exposure_sharp_state_constant() {
        let r = fi_asymptotic(AsymptoticCase::LowTDeltaZero, &GaussianMomentumState::delta(0.0), &bath(0.1, 1e-3)).unwrap();
        assert_relative_eq!(r.value * 0.01, 12.5, max_relative = 1e-12);
    }

    #[test]
    fn tau_cases_reference_values() {
        let e2m1 = E * E - 1.0;
        let r = fi_asymptotic(AsymptoticCase::TauDeltaZero, &GaussianMomentumState::delta(1.0), &bath(0.1, 1.0)).unwrap();
        assert_relative_eq!(r.value, 16.0 / (1e-3 * e2m1), max_relative = 1e-12);
        assert_relative_eq!(r.value, 2.504_28e3, max_relative = 1e-5);
        let r = fi_asymptotic(AsymptoticCase::TauP0Zero, &GaussianMomentumState::delta(0.0), &bath(0.1, 1.0)).unwrap();
        assert_relative_eq!(r.value * 0.01, (7.0 + E * E).powi(2) / (2.0 * e2m1 * e2m1), max_relative = 1e-12);
        assert_relative_eq!(r.value * 0.01, 2.5361, max_relative = 1e-4);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn sharp_state_at_tau_splits_into_mean_and_variance_limits() {
        // exact at every T: mean part = T^-3 formula, variance part = P0 = 0 formula
        for t in [0.3, 0.1, 0.01] {
            let s = GaussianMomentumState::delta(1.3);
            let b = bath(t, 1.0);
            let exact = fi_gaussian(&s, &b).unwrap().value;
            let sum = fi_asymptotic(AsymptoticCase::TauDeltaZero, &s, &b).unwrap().value
                + fi_asymptotic(AsymptoticCase::TauP0Zero, &s, &b).unwrap().value;
            assert_relative_eq!(exact, sum, max_relative = 1e-12);
        }
    }

    #[test]
    fn limits_are_approached() {
        // short exposure, broad state
        let s = GaussianMomentumState::from_width(1.0, 40.0).unwrap();
        let b = bath(0.05, 1e-4);
        let exact = fi_gaussian(&s, &b).unwrap().value;
        let r = fi_asymptotic(AsymptoticCase::LowTDeltaPos, &s, &b).unwrap();
        assert_relative_eq!(r.value, exact, max_relative = 2e-2);
        // t = tau, broad state, cold bath
        let b = bath(1e-4, 1.0);
        let exact = fi_gaussian(&s, &b).unwrap().value;
        let r = fi_asymptotic(AsymptoticCase::TauDeltaPos, &s, &b).unwrap();
        assert_relative_eq!(r.value, exact, max_relative = 1e-3);
        assert!(r.validity_margin.unwrap() > 1e3);
    }

    #[test]
    fn warns_outside_validity() {
        let r = fi_asymptotic(AsymptoticCase::TauDeltaZero, &GaussianMomentumState::delta(1.0), &bath(0.5, 2.0)).unwrap();
        assert_eq!(r.warnings.len(), 2);
        let r = fi_asymptotic(AsymptoticCase::TauDeltaPos, &GaussianMomentumState::delta(1.0), &bath(0.5, 1.0)).unwrap();
        assert!(r.warnings.iter().any(|w| w.contains("Delta > 0")));
    }
}
