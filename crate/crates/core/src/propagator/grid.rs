use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Result, ThermoError};

use super::{density_at, GaussianMomentumState};

/// Uniform momentum grid `p_min + i h`, `i = 0..points`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumGrid {
    pub p_min: f64,
    pub p_max: f64,
    pub points: usize,
}

pub const DEFAULT_GRID_POINTS: usize = 2048;

impl MomentumGrid {
    pub fn new(p_min: f64, p_max: f64, points: usize) -> Result<Self> {
        if !(p_min.is_finite() && p_max.is_finite() && p_max > p_min) {
            return Err(ThermoError::invalid("grid", format!("need p_min < p_max, got [{p_min}, {p_max}]")));
        }
        if points < 3 {
            return Err(ThermoError::invalid("grid.points", format!("need at least 3 points, got {points}")));
        }
        Ok(Self { p_min, p_max, points })
    }

    /// `[-L, L]` with `L = |P0| + 10 sqrt(max(V, M T))`.
    pub fn covering(state: &GaussianMomentumState, thermal_variance: f64, points: usize) -> Self {
        let half = state.mean.abs() + 10.0 * state.variance.max(thermal_variance).sqrt();
        Self {
            p_min: -half,
            p_max: half,
            points,
        }
    }

    pub fn spacing(&self) -> f64 {
        (self.p_max - self.p_min) / (self.points - 1) as f64
    }

    pub fn momentum(&self, i: usize) -> f64 {
        self.p_min + i as f64 * self.spacing()
    }

    pub fn momenta(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(move |i| self.momentum(i))
    }
}

/// Density values sampled on a [`MomentumGrid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDensity {
    pub grid: MomentumGrid,
    pub values: Vec<f64>,
}

impl GridDensity {
    pub fn from_fn(grid: MomentumGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.momenta().map(f).collect();
        Self { grid, values }
    }

    pub fn from_state(state: &GaussianMomentumState, grid: MomentumGrid) -> Result<Self> {
        if state.is_delta() {
            return Err(ThermoError::DeltaState);
        }
        Ok(Self::from_fn(grid, |p| density_at(state, p).unwrap_or(0.0)))
    }

    pub fn spacing(&self) -> f64 {
        self.grid.spacing()
    }

    /// `sum_i f_i h`.
    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.spacing()
    }

    pub fn mean(&self) -> f64 {
        let h = self.spacing();
        self.grid.momenta().zip(&self.values).map(|(p, f)| p * f).sum::<f64>() * h / self.mass()
    }

    pub fn variance(&self) -> f64 {
        let h = self.spacing();
        let mean = self.mean();
        self.grid
            .momenta()
            .zip(&self.values)
            .map(|(p, f)| (p - mean).powi(2) * f)
            .sum::<f64>()
            * h
            / self.mass()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn sup_distance(&self, other: &GridDensity) -> f64 {
        // NaN propagates instead of being skipped by f64::max
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, |m: f64, d| if m.is_nan() || d.is_nan() { f64::NAN } else { m.max(d) })
    }

    pub fn l1_distance(&self, other: &GridDensity) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).sum::<f64>() * self.spacing()
    }

    /// Writes `P,f` rows with a header line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "P,f")?;
        for (p, f) in self.grid.momenta().zip(&self.values) {
            writeln!(out, "{p:e},{f:e}")?;
        }
        Ok(())
    }

    /// Parses the output of [`Self::write_csv`]; `#` lines are skipped.
    pub fn read_csv(text: &str) -> Result<Self> {
        let mut ps = Vec::new();
        let mut fs = Vec::new();
        for line in text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()).skip(1) {
            let mut cols = line.split(',');
            let parse = |c: Option<&str>| -> Result<f64> {
                c.and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| ThermoError::invalid("csv", format!("bad row `{line}`")))
            };
            ps.push(parse(cols.next())?);
            fs.push(parse(cols.next())?);
        }
        let grid = MomentumGrid::new(*ps.first().unwrap_or(&0.0), *ps.last().unwrap_or(&0.0), ps.len())?;
        Ok(Self { grid, values: fs })
    }
}
