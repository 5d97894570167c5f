//! Two-temperature Fisher matrix for an impurity passing through two baths.

use serde::{Deserialize, Serialize};

use crate::error::{Result, ThermoError};
use crate::propagator::{compose_baths, density_at, BathStage, GaussianMomentumState};
use crate::quadrature::{integrate, QuadratureOptions};

/// Symmetric 2x2 Fisher information matrix for `(T1, T2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherMatrix2 {
    pub chi11: f64,
    pub chi12: f64,
    pub chi22: f64,
    /// Lower bound on `var(T1) + var(T2)`; `None` when the matrix is singular.
    pub trace_bound: Option<f64>,
}

/// Relative determinant threshold below which the matrix counts as singular.
const SINGULAR_TOL: f64 = 1e-12;

impl FisherMatrix2 {
    pub fn new(chi11: f64, chi12: f64, chi22: f64) -> Self {
        let mut m = Self {
            chi11,
            chi12,
            chi22,
            trace_bound: None,
        };
        m.trace_bound = crb_trace_bound(&m).ok();
        m
    }

    pub fn determinant(&self) -> f64 {
        self.chi11 * self.chi22 - self.chi12 * self.chi12
    }

    pub fn trace(&self) -> f64 {
        self.chi11 + self.chi22
    }
}

/// `(chi11 + chi22) / (chi11 chi22 - chi12^2)`, the trace of the inverse.
pub fn crb_trace_bound(chi: &FisherMatrix2) -> Result<f64> {
    let det = chi.determinant();
    let scale = (chi.chi11 * chi.chi22).abs();
    if !(det > SINGULAR_TOL * scale) || scale == 0.0 {
        return Err(ThermoError::SingularFim { det });
    }
    Ok(chi.trace() / det)
}

fn check_pair(stage1: &BathStage, stage2: &BathStage) -> Result<()> {
    stage1.validate()?;
    stage2.validate()?;
    if stage1.impurity_mass != stage2.impurity_mass {
        return Err(ThermoError::invalid("impurity_mass", "both stages must carry the same impurity mass"));
    }
    Ok(())
}

/// Analytic Gaussian-family Fisher matrix after two baths, derivatives at
/// fixed exposure times `t1`, `t2`.
pub fn fisher_matrix_two_bath(
    state: &GaussianMomentumState,
    stage1: &BathStage,
    stage2: &BathStage,
) -> Result<FisherMatrix2> {
    check_pair(stage1, stage2)?;
    let m = stage1.impurity_mass;
    let (t1, t2) = (stage1.temperature, stage2.temperature);
    let (x1, x2) = (stage1.exposure(), stage2.exposure());
    let dx1 = stage1.duration * stage1.law.rate_derivative(t1);
    let dx2 = stage2.duration * stage2.law.rate_derivative(t2);
    let (e1, e2) = ((-2.0 * x1).exp(), (-2.0 * x2).exp());
    let (g1, g2) = (-(-2.0 * x1).exp_m1(), -(-2.0 * x2).exp_m1());

    let mean = state.mean * (-x1 - x2).exp();
    let v1 = m * t1 * g1 + state.variance * e1;
    let variance = m * t2 * g2 + v1 * e2;
    if !(variance > 0.0) {
        return Err(ThermoError::invalid("state", "final variance is zero"));
    }
    let d_mean = [-mean * dx1, -mean * dx2];
    let d_var = [
        (m * g1 + 2.0 * dx1 * (m * t1 - state.variance) * e1) * e2,
        m * g2 + 2.0 * dx2 * (m * t2 - v1) * e2,
    ];
    let chi = |j: usize, k: usize| d_mean[j] * d_mean[k] / variance + d_var[j] * d_var[k] / (2.0 * variance * variance);
    let matrix = FisherMatrix2::new(chi(0, 0), chi(0, 1), chi(1, 1));
    if matrix.trace_bound.is_none() {
        return Err(ThermoError::SingularFim {
            det: matrix.determinant(),
        });
    }
    Ok(matrix)
}

/// Fisher matrix by quadrature of `d_j f d_k f / f` with central differences
/// in each temperature. Independent of the analytic derivatives above.
pub fn fisher_matrix_two_bath_numeric(
    state: &GaussianMomentumState,
    stage1: &BathStage,
    stage2: &BathStage,
    relative_step: f64,
) -> Result<FisherMatrix2> {
    check_pair(stage1, stage2)?;
    let final_state = |a: f64, b: f64| compose_baths(state, &[stage1.with_temperature(a), stage2.with_temperature(b)]);
    let center = final_state(stage1.temperature, stage2.temperature)?;
    if center.is_delta() {
        return Err(ThermoError::invalid("state", "final variance is zero"));
    }
    let (t1, t2) = (stage1.temperature, stage2.temperature);
    let (h1, h2) = (relative_step * t1, relative_step * t2);
    let shifted = [
        final_state(t1 + h1, t2)?,
        final_state(t1 - h1, t2)?,
        final_state(t1, t2 + h2)?,
        final_state(t1, t2 - h2)?,
    ];
    let derivs = |p: f64| {
        let d = |s: &GaussianMomentumState| density_at(s, p).unwrap_or(0.0);
        [
            (d(&shifted[0]) - d(&shifted[1])) / (2.0 * h1),
            (d(&shifted[2]) - d(&shifted[3])) / (2.0 * h2),
        ]
    };
    let opts = QuadratureOptions {
        rel_tol: 1e-10,
        abs_tol: 0.0,
        max_intervals: 4000,
    };
    let (lo, hi) = (center.mean - 12.0 * center.std_dev(), center.mean + 12.0 * center.std_dev());
    let entry = |j: usize, k: usize| -> Result<f64> {
        let f = |p: f64| {
            let f0 = density_at(&center, p).unwrap_or(0.0);
            if f0 <= 0.0 {
                return 0.0;
            }
            let d = derivs(p);
            d[j] * d[k] / f0
        };
        Ok(integrate(f, lo, center.mean, opts)?.value + integrate(f, center.mean, hi, opts)?.value)
    };
    Ok(FisherMatrix2::new(entry(0, 0)?, entry(0, 1)?, entry(1, 1)?))
}

/// Low-temperature limit of `trace_bound / T^2` for a sharp initial momentum
/// sent through two equal-temperature baths for one relaxation time each:
/// `4 coth(1)^2`, independent of `n`, `P0` and `M`.
pub fn trace_bound_limit() -> f64 {
    4.0 / 1.0f64.tanh().powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::friction::FrictionLaw;
    use approx::assert_relative_eq;

    fn stage(t: f64, exposure: f64) -> BathStage {
        BathStage::in_relaxation_times(t, FrictionLaw::new(1.0, 4).unwrap(), exposure, 1.0).unwrap()
    }

    #[test]
    fn bound_of_simple_matrices() {
        assert_relative_eq!(crb_trace_bound(&FisherMatrix2::new(1.0, 0.0, 1.0)).unwrap(), 2.0);
        assert_relative_eq!(crb_trace_bound(&FisherMatrix2::new(2.0, 0.0, 5.0)).unwrap(), 0.5 + 0.2);
        assert!(matches!(crb_trace_bound(&FisherMatrix2::new(1.0, 1.0, 1.0)), Err(ThermoError::SingularFim { .. })));
    }

    #[test]
    fn no_second_exposure_is_singular() {
        let s = GaussianMomentumState::delta(1.0);
        let err = fisher_matrix_two_bath(&s, &stage(0.1, 1.0), &stage(0.1, 0.0)).unwrap_err();
        assert!(matches!(err, ThermoError::SingularFim { .. }));
    }

    #[test]
    fn analytic_matches_quadrature() {
        let s = GaussianMomentumState::delta(1.0);
        for (t1, t2, x1, x2) in [(0.5, 0.5, 1.0, 1.0), (0.3, 0.7, 0.4, 2.0)] {
            let a = fisher_matrix_two_bath(&s, &stage(t1, x1), &stage(t2, x2)).unwrap();
            let q = fisher_matrix_two_bath_numeric(&s, &stage(t1, x1), &stage(t2, x2), 1e-5).unwrap();
            for (x, y) in [(a.chi11, q.chi11), (a.chi12, q.chi12), (a.chi22, q.chi22)] {
                assert_relative_eq!(x, y, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn limit_constant() {
        assert_relative_eq!(trace_bound_limit(), 6.89625, max_relative = 1e-6);
        let s = GaussianMomentumState::delta(1.0);
        let t = 1e-6;
        let m = fisher_matrix_two_bath(&s, &stage(t, 1.0), &stage(t, 1.0)).unwrap();
        assert_relative_eq!(m.trace_bound.unwrap() / (t * t), trace_bound_limit(), max_relative = 1e-4);
    }

    #[test]
    fn matrix_is_positive_semidefinite() {
        let s = GaussianMomentumState::from_width(0.4, 0.3).unwrap();
        for (t1, t2) in [(0.1, 0.2), (0.5, 0.05), (1.0, 1.0)] {
            let m = fisher_matrix_two_bath(&s, &stage(t1, 0.7), &stage(t2, 1.3)).unwrap();
            assert!(m.chi11 >= 0.0 && m.chi22 >= 0.0);
            assert!(m.determinant() >= -1e-12 * m.chi11 * m.chi22);
        }
    }
}
