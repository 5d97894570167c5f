//! Eigen-expansion of the Fokker–Planck operator.
//!
//! In the scaled momentum `y = P / sqrt(2 M T)` the operator becomes an
//! Ornstein–Uhlenbeck generator whose eigenfunctions are `H_n(y) exp(-y^2)`
//! with decay rates `n / tau`. Densities are expanded as
//!
//! ```text
//! f_y(y) = sum_n a_n psi_n(y) exp(-y^2),   a_n = \int f_y(y) psi_n(y) dy
//! ```
//!
//! where `psi_n` are Hermite polynomials normalised against `exp(-y^2)`.
//! The coefficients of a Gaussian initial state are computed with a
//! Gauss–Hermite rule centred on that Gaussian, which is exact for the
//! polynomial integrand.

use crate::error::{Result, ThermoError};
use crate::quadrature::gauss_hermite;

use super::{BathStage, GaussianMomentumState, GridDensity, MomentumGrid};

/// Largest tolerated share of the last retained modes in the expansion.
pub const SPECTRAL_TOLERANCE: f64 = 1e-8;

const PI_M4: f64 = 0.751_125_544_464_942_5;

/// Normalised Hermite polynomials `psi_0..psi_{n-1}` at `y`.
fn hermite_polynomials(y: f64, n: usize, out: &mut Vec<f64>) {
    out.clear();
    let mut prev = 0.0;
    let mut cur = PI_M4;
    for k in 0..n {
        out.push(cur);
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * y * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
}

/// Hermite functions `psi_n(y) exp(-y^2/2)`, bounded for all `y`.
fn hermite_functions(y: f64, n: usize, out: &mut Vec<f64>) {
    out.clear();
    let mut prev = 0.0;
    let mut cur = PI_M4 * (-0.5 * y * y).exp();
    for k in 0..n {
        out.push(cur);
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * y * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
}

/// Mode coefficients of a momentum density in the oscillator basis of a bath.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralExpansion {
    /// `sqrt(2 M T)` of the bath that defines the basis.
    pub scale: f64,
    pub coefficients: Vec<f64>,
}

impl SpectralExpansion {
    /// Projects a Gaussian state onto the first `modes` eigenfunctions of the
    /// bath with thermal variance `thermal_variance = M T`.
    pub fn project(state: &GaussianMomentumState, thermal_variance: f64, modes: usize) -> Result<Self> {
        if state.is_delta() {
            return Err(ThermoError::DeltaState);
        }
        if modes == 0 {
            return Err(ThermoError::invalid("modes", "need at least one mode"));
        }
        let scale = (2.0 * thermal_variance).sqrt();
        let y0 = state.mean / scale;
        let spread = (2.0 * state.variance).sqrt() / scale;
        let (nodes, weights) = gauss_hermite(modes + 8);
        let mut coefficients = vec![0.0; modes];
        let mut psi = Vec::with_capacity(modes);
        for (u, w) in nodes.iter().zip(&weights) {
            hermite_polynomials(y0 + spread * u, modes, &mut psi);
            for (c, p) in coefficients.iter_mut().zip(&psi) {
                *c += w * p;
            }
        }
        let norm = std::f64::consts::PI.sqrt();
        coefficients.iter_mut().for_each(|c| *c /= norm);
        Ok(Self { scale, coefficients })
    }

    /// Each mode damped by `exp(-n t / tau)`.
    pub fn damped(&self, exposure: f64) -> Self {
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(n, c)| c * (-(n as f64) * exposure).exp())
            .collect();
        Self {
            scale: self.scale,
            coefficients,
        }
    }

    /// Share of the last two retained modes in the total coefficient mass.
    pub fn truncation_ratio(&self) -> f64 {
        let total: f64 = self.coefficients.iter().map(|c| c.abs()).sum();
        let tail = self.coefficients.iter().rev().take(2).map(|c| c.abs()).fold(0.0, f64::max);
        if total == 0.0 {
            0.0
        } else {
            tail / total
        }
    }

    /// Momentum density reconstructed from the expansion.
    pub fn density(&self, momentum: f64) -> f64 {
        let mut h = Vec::with_capacity(self.coefficients.len());
        self.density_with(momentum, &mut h)
    }

    fn density_with(&self, momentum: f64, h: &mut Vec<f64>) -> f64 {
        let y = momentum / self.scale;
        hermite_functions(y, self.coefficients.len(), h);
        let sum: f64 = self.coefficients.iter().zip(h.iter()).map(|(a, h)| a * h).sum();
        sum * (-0.5 * y * y).exp() / self.scale
    }

    pub fn on_grid(&self, grid: MomentumGrid) -> GridDensity {
        let mut h = Vec::with_capacity(self.coefficients.len());
        let values = grid.momenta().map(|p| self.density_with(p, &mut h)).collect();
        GridDensity { grid, values }
    }
}

/// Evolves a Gaussian state by damping its oscillator-mode expansion.
pub fn evolve_spectral(
    state: &GaussianMomentumState,
    bath: &BathStage,
    modes: usize,
    grid: MomentumGrid,
) -> Result<GridDensity> {
    bath.validate()?;
    if modes < 8 {
        return Err(ThermoError::invalid("modes", format!("need at least 8 modes, got {modes}")));
    }
    let evolved = SpectralExpansion::project(state, bath.thermal_variance(), modes)?.damped(bath.exposure());
    let ratio = evolved.truncation_ratio();
    if ratio > SPECTRAL_TOLERANCE {
        return Err(ThermoError::TruncationNotConverged { ratio });
    }
    Ok(evolved.on_grid(grid))
}
