//! Bath–impurity parameters and the friction regimes they select.

use serde::{Deserialize, Serialize};

use crate::error::{Result, ThermoError};

/// Masses, sound velocity, coupling and unit constants of the bath–impurity system.
///
/// Temperatures handed to the rest of the library are in the same units as
/// `kb * T` is an energy; with the defaults (`hbar = kb = 1`) temperatures
/// are energies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub impurity_mass: f64,
    pub boson_mass: f64,
    pub sound_velocity: f64,
    pub coupling: f64,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "one")]
    pub kb: f64,
}

fn one() -> f64 {
    1.0
}

/// Mass ratio below which the heavy-impurity picture is flagged.
pub const HEAVY_IMPURITY_RATIO: f64 = 10.0;

impl PhysicalParams {
    pub fn new(impurity_mass: f64, boson_mass: f64, sound_velocity: f64, coupling: f64) -> Result<Self> {
        let p = Self {
            impurity_mass,
            boson_mass,
            sound_velocity,
            coupling,
            hbar: 1.0,
            kb: 1.0,
        };
        p.validate()?;
        Ok(p)
    }

    /// `hbar = m = v = kb = 1`, impurity mass `M` and coupling `G`.
    pub fn natural(impurity_mass: f64, coupling: f64) -> Result<Self> {
        Self::new(impurity_mass, 1.0, 1.0, coupling)
    }

    pub fn with_constants(mut self, hbar: f64, kb: f64) -> Result<Self> {
        self.hbar = hbar;
        self.kb = kb;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("impurity_mass", self.impurity_mass),
            ("boson_mass", self.boson_mass),
            ("sound_velocity", self.sound_velocity),
            ("coupling", self.coupling),
            ("hbar", self.hbar),
            ("kb", self.kb),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(ThermoError::invalid(name, format!("must be finite and > 0, got {value}")));
            }
        }
        Ok(())
    }

    pub fn mass_ratio(&self) -> f64 {
        self.impurity_mass / self.boson_mass
    }

    /// Warning text when `M/m` is too small for the heavy-impurity treatment.
    pub fn heavy_impurity_warning(&self) -> Option<String> {
        let ratio = self.mass_ratio();
        (ratio < HEAVY_IMPURITY_RATIO)
            .then(|| format!("M/m = {ratio} < {HEAVY_IMPURITY_RATIO}: heavy-impurity approximation is questionable"))
    }

    /// Energy scale `m v^2`.
    pub fn energy_scale(&self) -> f64 {
        self.boson_mass * self.sound_velocity * self.sound_velocity
    }

    /// `T~ = kb T / (m v^2)`.
    pub fn reduced_temperature(&self, temperature: f64) -> f64 {
        self.kb * temperature / self.energy_scale()
    }

    /// Inverse of [`Self::reduced_temperature`].
    pub fn temperature_from_reduced(&self, reduced: f64) -> f64 {
        reduced * self.energy_scale() / self.kb
    }

    /// `G~ = G / (hbar v)`.
    pub fn reduced_coupling(&self) -> f64 {
        self.coupling / (self.hbar * self.sound_velocity)
    }

    /// The same system expressed with `hbar = kb = m = v = 1`.
    pub fn to_natural(&self) -> Self {
        Self {
            impurity_mass: self.mass_ratio(),
            boson_mass: 1.0,
            sound_velocity: 1.0,
            coupling: self.reduced_coupling(),
            hbar: 1.0,
            kb: 1.0,
        }
    }

    /// Converts a friction coefficient with exponent `n` (acting on user
    /// temperatures) into natural units.
    pub fn gamma_to_natural(&self, gamma: f64, exponent: u32) -> f64 {
        let rate_unit = self.energy_scale() / self.hbar;
        gamma * (self.energy_scale() / self.kb).powi(exponent as i32) / rate_unit
    }
}

/// Asymptotic friction regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `1/G~ << T~ << 1`, friction ~ T^2.
    StrongHigh,
    /// `T~ << 1/G~ << 1`, friction ~ T^4.
    StrongLow,
    /// `G~ << 1`, `T~ << 1`, friction ~ T^4.
    Weak,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::StrongHigh, Regime::StrongLow, Regime::Weak];

    pub fn exponent(self) -> u32 {
        match self {
            Regime::StrongHigh => 2,
            Regime::StrongLow | Regime::Weak => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::StrongHigh => "strong-high",
            Regime::StrongLow => "strong-low",
            Regime::Weak => "weak",
        }
    }

    /// Inequalities `small * margin <= large` defining the regime, with labels.
    fn chain(self, reduced_t: f64, reduced_g: f64) -> [(&'static str, f64, f64); 2] {
        match self {
            Regime::StrongHigh => [("1/G~ << T~", 1.0 / reduced_g, reduced_t), ("T~ << 1", reduced_t, 1.0)],
            Regime::StrongLow => [("T~ << 1/G~", reduced_t, 1.0 / reduced_g), ("1/G~ << 1", 1.0 / reduced_g, 1.0)],
            Regime::Weak => [("G~ << 1", reduced_g, 1.0), ("T~ << 1", reduced_t, 1.0)],
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = ThermoError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "strong-high" => Ok(Regime::StrongHigh),
            "strong-low" => Ok(Regime::StrongLow),
            "weak" => Ok(Regime::Weak),
            other => Err(ThermoError::invalid("regime", format!("unknown regime `{other}`"))),
        }
    }
}

/// Default factor that turns "<<" into a checkable inequality.
pub const DEFAULT_REGIME_MARGIN: f64 = 10.0;

/// Picks the regime whose inequality chain holds with at least `margin`.
pub fn classify_regime(params: &PhysicalParams, temperature: f64, margin: f64) -> Result<Regime> {
    params.validate()?;
    if !(temperature > 0.0) {
        return Err(ThermoError::Domain(temperature));
    }
    let t = params.reduced_temperature(temperature);
    let g = params.reduced_coupling();
    // relative slack absorbs rounding in e.g. 1/G~ computed from G~
    let holds = |small: f64, large: f64| small * margin <= large * (1.0 + 1e-12);
    let mut violated = Vec::new();
    for regime in Regime::ALL {
        let chain = regime.chain(t, g);
        let failed: Vec<_> = chain.iter().filter(|(_, s, l)| !holds(*s, *l)).collect();
        if failed.is_empty() {
            return Ok(regime);
        }
        let labels: Vec<_> = failed.iter().map(|(label, s, l)| format!("{label} ({s:.3e} vs {l:.3e})")).collect();
        violated.push(format!("{}: {}", regime.name(), labels.join(", ")));
    }
    Err(ThermoError::AmbiguousRegime {
        margin,
        violated: violated.join("; "),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with_reduced(g: f64) -> PhysicalParams {
        PhysicalParams::natural(100.0, g).unwrap()
    }

    #[test]
    fn classifies_documented_points() {
        assert_eq!(classify_regime(&with_reduced(100.0), 0.1, 10.0).unwrap(), Regime::StrongHigh);
        assert_eq!(classify_regime(&with_reduced(0.01), 0.001, 10.0).unwrap(), Regime::Weak);
        assert_eq!(classify_regime(&with_reduced(100.0), 1e-4, 10.0).unwrap(), Regime::StrongLow);
        let err = classify_regime(&with_reduced(2.0), 0.4, 10.0).unwrap_err();
        match err {
            ThermoError::AmbiguousRegime { violated, .. } => {
                assert!(violated.contains("G~ << 1"), "{violated}");
                assert!(violated.contains("T~ << 1"), "{violated}");
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn margin_is_configurable() {
        assert!(classify_regime(&with_reduced(2.0), 0.4, 1.0).is_ok());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(PhysicalParams::new(1.0, 0.0, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(f64::NAN, 1.0, 1.0, 1.0).is_err());
        assert!(matches!(
            classify_regime(&with_reduced(1.0), -1.0, 10.0),
            Err(ThermoError::Domain(_))
        ));
    }

    #[test]
    fn light_impurity_is_flagged_not_rejected() {
        let p = PhysicalParams::new(2.0, 1.0, 1.0, 1.0).unwrap();
        assert!(p.heavy_impurity_warning().is_some());
        assert!(with_reduced(1.0).heavy_impurity_warning().is_none());
    }

    #[test]
    fn regime_names_round_trip() {
        for r in Regime::ALL {
            assert_eq!(r.name().parse::<Regime>().unwrap(), r);
        }
    }
}
