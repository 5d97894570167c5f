//! Conservative finite-volume solver for the linear Fokker–Planck equation
//!
//! ```text
//! df/dt = d/dP [ a P f + (D/2) df/dP ],   a = gamma T^n,  D/2 = a M T
//! ```
//!
//! Interface fluxes use Chang–Cooper (Scharfetter–Gummel) weighting, which
//! keeps the discrete operator an M-matrix and makes the sampled Gaussian
//! `exp(-P^2 / 2MT)` its exact null vector. Boundary fluxes are zero, so the
//! columns of the operator sum to zero and `sum f_i h` is conserved.

use serde::{Deserialize, Serialize};

use crate::error::{Result, ThermoError};

use super::{BathStage, GaussianMomentumState, GridDensity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeScheme {
    BackwardEuler,
    /// Crank–Nicolson after two steps replaced by four backward-Euler half steps.
    CrankNicolson,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdmOptions {
    /// Time step; the last step is shortened so the run ends at the bath duration.
    pub dt: f64,
    pub scheme: TimeScheme,
    /// Largest density allowed at either end of the grid.
    pub boundary_threshold: f64,
}

impl FdmOptions {
    pub fn new(dt: f64) -> Self {
        Self {
            dt,
            scheme: TimeScheme::CrankNicolson,
            boundary_threshold: 1e-12,
        }
    }
}

/// Solver output with step-size diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FdmOutcome {
    pub density: GridDensity,
    pub steps: usize,
    pub dt: f64,
    /// `(D/2) dt / h^2`.
    pub diffusion_number: f64,
    /// Largest `|P| h / (M T)` on the grid (cell drift/diffusion ratio).
    pub max_cell_peclet: f64,
    /// Largest change of `sum f_i h` over a single step.
    pub max_mass_drift: f64,
    pub min_value: f64,
}

/// `x / (e^x - 1)`, continuous at 0.
fn bernoulli(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - 0.5 * x
    } else {
        x / x.exp_m1()
    }
}

/// Tridiagonal operator `(sub, diag, sup)` with `sub[0] = sup[n-1] = 0`.
struct Tridiagonal {
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
}

impl Tridiagonal {
    fn apply(&self, x: &[f64], scale: f64, out: &mut [f64]) {
        let n = x.len();
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.sub[i] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.sup[i] * x[i + 1];
            }
            out[i] = x[i] + scale * acc;
        }
    }
}

/// LU factors of `I - scale * A` for repeated Thomas solves.
struct Factorized {
    lower: Vec<f64>,
    pivot: Vec<f64>,
    upper: Vec<f64>,
}

impl Factorized {
    fn new(op: &Tridiagonal, scale: f64) -> Self {
        let n = op.diag.len();
        let mut lower = vec![0.0; n];
        let mut pivot = vec![0.0; n];
        let upper: Vec<f64> = op.sup.iter().map(|s| -scale * s).collect();
        pivot[0] = 1.0 - scale * op.diag[0];
        for i in 1..n {
            lower[i] = -scale * op.sub[i] / pivot[i - 1];
            pivot[i] = 1.0 - scale * op.diag[i] - lower[i] * upper[i - 1];
        }
        Self { lower, pivot, upper }
    }

    fn solve(&self, rhs: &mut [f64]) {
        let n = rhs.len();
        for i in 1..n {
            rhs[i] -= self.lower[i] * rhs[i - 1];
        }
        rhs[n - 1] /= self.pivot[n - 1];
        for i in (0..n - 1).rev() {
            rhs[i] = (rhs[i] - self.upper[i] * rhs[i + 1]) / self.pivot[i];
        }
    }
}

fn chang_cooper_operator(density: &GridDensity, bath: &BathStage) -> Tridiagonal {
    let n = density.values.len();
    let h = density.spacing();
    let mt = bath.thermal_variance();
    let half_d = bath.law.rate(bath.temperature) * mt;
    let k = half_d / (h * h);
    let mut sub = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n];
    for i in 0..n - 1 {
        let p_face = density.grid.momentum(i) + 0.5 * h;
        let w = p_face * h / mt;
        // J_{i+1/2} = k h [B(-w) f_{i+1} - B(w) f_i]
        let forward = k * bernoulli(-w);
        let backward = k * bernoulli(w);
        sup[i] += forward;
        diag[i] -= backward;
        sub[i + 1] += backward;
        diag[i + 1] -= forward;
    }
    Tridiagonal { sub, diag, sup }
}

/// Advances a gridded density through one bath with the default Crank–Nicolson scheme.
pub fn evolve_fdm(initial: &GridDensity, bath: &BathStage, dt: f64) -> Result<FdmOutcome> {
    evolve_fdm_with(initial, bath, FdmOptions::new(dt))
}

pub fn evolve_fdm_with(initial: &GridDensity, bath: &BathStage, opts: FdmOptions) -> Result<FdmOutcome> {
    bath.validate()?;
    if !(opts.dt > 0.0 && opts.dt.is_finite()) {
        return Err(ThermoError::invalid("dt", format!("must be > 0, got {}", opts.dt)));
    }
    let n = initial.values.len();
    if n < 3 {
        return Err(ThermoError::invalid("grid.points", "need at least 3 points"));
    }
    let stationary = GaussianMomentumState::stationary(bath.impurity_mass, bath.temperature);
    let edge = |p: f64| super::density_at(&stationary, p).unwrap_or(0.0);
    let boundary = [
        initial.values[0],
        initial.values[n - 1],
        edge(initial.grid.p_min),
        edge(initial.grid.p_max),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    if boundary > opts.boundary_threshold {
        return Err(ThermoError::GridTooNarrow {
            density: boundary,
            threshold: opts.boundary_threshold,
        });
    }

    let h = initial.spacing();
    let op = chang_cooper_operator(initial, bath);
    let half_d = bath.law.rate(bath.temperature) * bath.thermal_variance();
    let max_cell_peclet = initial.grid.p_min.abs().max(initial.grid.p_max.abs()) * h / bath.thermal_variance();

    let total = bath.duration;
    let steps = if total == 0.0 { 0 } else { (total / opts.dt).ceil() as usize };
    let dt = if steps == 0 { opts.dt } else { total / steps as f64 };

    let mut f = initial.values.clone();
    let mut rhs = vec![0.0; n];
    let mut mass = f.iter().sum::<f64>() * h;
    let mut max_mass_drift: f64 = 0.0;
    let mut track = |f: &[f64], mass: &mut f64| {
        let m = f.iter().sum::<f64>() * h;
        max_mass_drift = max_mass_drift.max((m - *mass).abs());
        *mass = m;
    };

    let startup = match opts.scheme {
        TimeScheme::CrankNicolson => steps.min(2),
        TimeScheme::BackwardEuler => steps,
    };
    if startup > 0 {
        let be_step = if opts.scheme == TimeScheme::CrankNicolson { 0.5 * dt } else { dt };
        let substeps = if opts.scheme == TimeScheme::CrankNicolson { 2 * startup } else { startup };
        let lu = Factorized::new(&op, be_step);
        for _ in 0..substeps {
            lu.solve(&mut f);
            track(&f, &mut mass);
        }
    }
    if steps > startup {
        let lu = Factorized::new(&op, 0.5 * dt);
        for _ in startup..steps {
            op.apply(&f, 0.5 * dt, &mut rhs);
            std::mem::swap(&mut f, &mut rhs);
            lu.solve(&mut f);
            track(&f, &mut mass);
        }
    }

    let density = GridDensity {
        grid: initial.grid,
        values: f,
    };
    let min_value = density.min_value();
    Ok(FdmOutcome {
        density,
        steps,
        dt,
        diffusion_number: half_d * dt / (h * h),
        max_cell_peclet,
        max_mass_drift,
        min_value,
    })
}
