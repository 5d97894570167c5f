//! Browser bindings for the interactive demo page in `www/`.

use impurity_thermometry::fisher::fi_gaussian;
use impurity_thermometry::friction::{friction_force_integral, gamma_coefficient};
use impurity_thermometry::propagator::{evolve_fdm, evolve_gaussian, evolve_spectral};
use impurity_thermometry::quadrature::QuadratureOptions;
use impurity_thermometry::{
    BathStage, FrictionLaw, GaussianMomentumState, GridDensity, MomentumGrid, PhysicalParams, ReflectionModel, Regime,
    ThermoError,
};
use wasm_bindgen::prelude::*;

fn js(e: ThermoError) -> JsError {
    JsError::new(&e.to_string())
}

/// A momentum density sampled on a uniform grid.
#[wasm_bindgen]
pub struct Density {
    momenta: Vec<f64>,
    values: Vec<f64>,
    mean: f64,
    variance: f64,
}

#[wasm_bindgen]
impl Density {
    #[wasm_bindgen(getter)]
    pub fn momenta(&self) -> Vec<f64> {
        self.momenta.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn mean(&self) -> f64 {
        self.mean
    }

    #[wasm_bindgen(getter)]
    pub fn variance(&self) -> f64 {
        self.variance
    }
}

/// Bath parameters shared by the density and Fisher-information views.
#[wasm_bindgen]
#[derive(Clone, Copy)]
pub struct Setup {
    pub impurity_mass: f64,
    pub gamma: f64,
    pub exponent: u32,
    pub initial_momentum: f64,
    pub initial_width: f64,
}

#[wasm_bindgen]
impl Setup {
    #[wasm_bindgen(constructor)]
    pub fn new(impurity_mass: f64, gamma: f64, exponent: u32, initial_momentum: f64, initial_width: f64) -> Setup {
        Setup {
            impurity_mass,
            gamma,
            exponent,
            initial_momentum,
            initial_width,
        }
    }
}

impl Setup {
    fn initial(&self) -> Result<GaussianMomentumState, ThermoError> {
        GaussianMomentumState::from_width(self.initial_momentum, self.initial_width)
    }

    fn bath(&self, temperature: f64, exposure: f64) -> Result<BathStage, ThermoError> {
        let law = FrictionLaw::new(self.gamma, self.exponent)?;
        BathStage::in_relaxation_times(temperature, law, exposure, self.impurity_mass)
    }
}

/// Density after `exposure` relaxation times at `temperature`, computed with
/// `method` (`gaussian`, `spectral` or `fdm`) on `points` grid points.
#[wasm_bindgen]
pub fn propagate(setup: &Setup, temperature: f64, exposure: f64, method: &str, points: usize) -> Result<Density, JsError> {
    let initial = setup.initial().map_err(js)?;
    let bath = setup.bath(temperature, exposure).map_err(js)?;
    let grid = MomentumGrid::covering(&initial, bath.thermal_variance(), points);
    let density = match method {
        "gaussian" => GridDensity::from_state(&evolve_gaussian(&initial, &bath), grid).map_err(js)?,
        "spectral" => evolve_spectral(&initial, &bath, 200, grid).map_err(js)?,
        "fdm" => {
            let start = GridDensity::from_state(&initial, grid).map_err(js)?;
            evolve_fdm(&start, &bath, bath.relaxation_time() / 500.0).map_err(js)?.density
        }
        other => return Err(JsError::new(&format!("unknown method `{other}`"))),
    };
    Ok(Density {
        momenta: density.grid.momenta().collect(),
        mean: density.mean(),
        variance: density.variance(),
        values: density.values,
    })
}

/// Fisher information after `i * span / points` relaxation times, for
/// `i = 1..=points`, divided by its value after one relaxation time.
#[wasm_bindgen]
pub fn gamma_curve(setup: &Setup, temperature: f64, span: f64, points: usize) -> Result<Vec<f64>, JsError> {
    let initial = setup.initial().map_err(js)?;
    let at_tau = setup.bath(temperature, 1.0).map_err(js)?;
    let reference = fi_gaussian(&initial, &at_tau).map_err(js)?.value;
    (1..=points)
        .map(|i| {
            let t = span * i as f64 / points as f64 * at_tau.relaxation_time();
            Ok(fi_gaussian(&initial, &at_tau.with_duration(t)).map_err(js)?.value / reference)
        })
        .collect()
}

/// Friction coefficient from the scattering integral and from the asymptotic
/// power law, on a log grid of reduced temperatures.
#[wasm_bindgen]
pub struct FrictionCurve {
    reduced: Vec<f64>,
    integral: Vec<f64>,
    asymptotic: Vec<f64>,
}

#[wasm_bindgen]
impl FrictionCurve {
    #[wasm_bindgen(getter)]
    pub fn reduced(&self) -> Vec<f64> {
        self.reduced.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn integral(&self) -> Vec<f64> {
        self.integral.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn asymptotic(&self) -> Vec<f64> {
        self.asymptotic.clone()
    }
}

/// `regime` is `weak`, `strong-low` or `strong-high`; the latter uses unit
/// reflection, the others the calibrated quadratic reflection.
#[wasm_bindgen]
pub fn friction_curve(
    impurity_mass: f64,
    coupling: f64,
    regime: &str,
    reduced_min: f64,
    reduced_max: f64,
    points: usize,
) -> Result<FrictionCurve, JsError> {
    let regime = match regime {
        "weak" => Regime::Weak,
        "strong-low" => Regime::StrongLow,
        "strong-high" => Regime::StrongHigh,
        other => return Err(JsError::new(&format!("unknown regime `{other}`"))),
    };
    if !(reduced_min > 0.0 && reduced_max > reduced_min && points >= 2) {
        return Err(JsError::new("need 0 < min < max and at least two points"));
    }
    let params = PhysicalParams::natural(impurity_mass, coupling).map_err(js)?;
    let reflection = match regime {
        Regime::StrongHigh => ReflectionModel::Unit,
        r => ReflectionModel::calibrated_quadratic(&params, r).map_err(js)?,
    };
    let law = gamma_coefficient(&params, regime);
    let momentum = 1.0;
    let ratio = (reduced_max / reduced_min).ln() / (points - 1) as f64;
    let mut curve = FrictionCurve {
        reduced: Vec::with_capacity(points),
        integral: Vec::with_capacity(points),
        asymptotic: Vec::with_capacity(points),
    };
    for i in 0..points {
        let reduced = reduced_min * (ratio * i as f64).exp();
        let t = params.temperature_from_reduced(reduced);
        let force =
            friction_force_integral(momentum, &params, &reflection, t, QuadratureOptions::default()).map_err(js)?;
        curve.reduced.push(reduced);
        curve.integral.push(-force / momentum);
        curve.asymptotic.push(law.rate(t));
    }
    Ok(curve)
}
