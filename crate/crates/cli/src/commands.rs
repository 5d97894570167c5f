//! One function per subcommand, each turning a resolved config into an [`Output`].

use impurity_thermometry::estimators::{mc_experiment, McConfig, Protocol};
use impurity_thermometry::fisher::{
    cramer_rao, fi_asymptotic, fi_gaussian, fi_general_closed, fi_numeric, fisher_matrix_two_bath, FisherReport,
    NumericFisherOptions,
};
use impurity_thermometry::friction::{fit_friction_law, friction_force_integral, gamma_coefficient};
use impurity_thermometry::propagator::{evolve_fdm, evolve_gaussian, evolve_spectral, sample_trajectories};
use impurity_thermometry::quadrature::QuadratureOptions;
use impurity_thermometry::stats::mean_variance;
use impurity_thermometry::{
    BathStage, FrictionLaw, GaussianMomentumState, GridDensity, MomentumGrid, PhysicalParams, ReflectionModel, Regime,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{parse_grid, Config, FisherMethodSpec, Format, PropagationMethod, ReflectionSpec, SweepParameter};
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Output};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Friction,
    Propagate,
    Sample,
    Fisher,
    Estimate,
    TwoBath,
    Figure1,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Friction => "friction",
            Command::Propagate => "propagate",
            Command::Sample => "sample",
            Command::Fisher => "fisher",
            Command::Estimate => "estimate",
            Command::TwoBath => "two-bath",
            Command::Figure1 => "figure1",
            Command::Sweep => "sweep",
        }
    }

    /// Tabular results default to CSV, single reports to JSON.
    pub fn default_format(self) -> Format {
        match self {
            Command::Fisher | Command::Estimate | Command::TwoBath => Format::Json,
            _ => Format::Csv,
        }
    }

    pub fn run(self, config: &Config) -> CliResult<Output> {
        match self {
            Command::Friction => friction(config),
            Command::Propagate => propagate(config),
            Command::Sample => sample(config),
            Command::Fisher => fisher(config),
            Command::Estimate => estimate(config),
            Command::TwoBath => two_bath(config),
            Command::Figure1 => figure1(config),
            Command::Sweep => sweep(config),
        }
    }
}

fn law(config: &Config) -> CliResult<FrictionLaw> {
    Ok(FrictionLaw::new(config.gamma, config.exponent)?)
}

fn initial_state(config: &Config) -> CliResult<GaussianMomentumState> {
    Ok(GaussianMomentumState::from_width(config.initial_momentum, config.initial_width)?)
}

fn bath(config: &Config, temperature: f64, exposure: f64) -> CliResult<BathStage> {
    Ok(BathStage::in_relaxation_times(temperature, law(config)?, exposure, config.impurity_mass)?)
}

fn to_json<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("library reports serialize")
}

fn friction(config: &Config) -> CliResult<Output> {
    if config.momentum == 0.0 {
        return Err(CliError::config("momentum must be nonzero to extract a friction coefficient"));
    }
    let m = &config.medium;
    let params = PhysicalParams::new(config.impurity_mass, m.boson_mass, m.sound_velocity, m.coupling)?.with_constants(m.hbar, m.kb)?;
    let (refl, regime) = match config.reflection {
        ReflectionSpec::Unit => (ReflectionModel::Unit, Some(Regime::StrongHigh)),
        ReflectionSpec::Quadratic { c } => (ReflectionModel::Quadratic { c }, None),
        ReflectionSpec::Calibrated { regime } => (ReflectionModel::calibrated_quadratic(&params, regime)?, Some(regime)),
    };
    let reduced = parse_grid(&config.reduced_temperatures)?;
    let temps: Vec<f64> = reduced.iter().map(|&t| params.temperature_from_reduced(t)).collect();
    let opts = QuadratureOptions::default();
    let forces = temps
        .par_iter()
        .map(|&t| friction_force_integral(config.momentum, &params, &refl, t, opts))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let fit = fit_friction_law(&params, &refl, &temps, opts)?;
    let reference = regime.map(|r| gamma_coefficient(&params, r));

    let rows = reduced
        .iter()
        .zip(&temps)
        .zip(&forces)
        .map(|((&r, &t), &f)| vec![Cell::Num(r), Cell::Num(t), Cell::Num(f), Cell::Num(-f / config.momentum)])
        .collect();
    let points: Vec<Value> = reduced
        .iter()
        .zip(&temps)
        .zip(&forces)
        .map(|((&r, &t), &f)| json!({"reduced_temperature": r, "temperature": t, "force": f, "coefficient": -f / config.momentum}))
        .collect();
    Ok(Output {
        columns: cols(&["reduced_temperature", "temperature", "force", "coefficient"]),
        rows,
        json: json!({
            "points": points,
            "fit": to_json(&fit.fit),
            "fitted_law": to_json(&fit.law),
            "asymptotic_law": to_json(&reference),
            "warning": params.heavy_impurity_warning(),
        }),
    })
}

fn propagate(config: &Config) -> CliResult<Output> {
    let initial = initial_state(config)?;
    let b = bath(config, config.temperature, config.exposure)?;
    let grid = MomentumGrid::covering(&initial, b.thermal_variance(), config.grid_points);
    let mut diagnostics = json!({});
    let density = match config.method {
        PropagationMethod::Gaussian => GridDensity::from_state(&evolve_gaussian(&initial, &b), grid)?,
        PropagationMethod::Spectral => evolve_spectral(&initial, &b, config.modes, grid)?,
        PropagationMethod::Fdm => {
            if !(config.steps_per_tau >= 1.0) {
                return Err(CliError::config("steps_per_tau must be at least 1"));
            }
            let start = GridDensity::from_state(&initial, grid)?;
            let outcome = evolve_fdm(&start, &b, b.relaxation_time() / config.steps_per_tau)?;
            diagnostics = json!({
                "steps": outcome.steps,
                "dt": outcome.dt,
                "diffusion_number": outcome.diffusion_number,
                "max_cell_peclet": outcome.max_cell_peclet,
                "max_mass_drift": outcome.max_mass_drift,
                "min_value": outcome.min_value,
            });
            outcome.density
        }
    };
    let rows = density
        .grid
        .momenta()
        .zip(&density.values)
        .map(|(p, &f)| vec![Cell::Num(p), Cell::Num(f)])
        .collect();
    Ok(Output {
        columns: cols(&["P", "f"]),
        rows,
        json: json!({
            "method": to_json(&config.method),
            "mass": density.mass(),
            "mean": density.mean(),
            "variance": density.variance(),
            "diagnostics": diagnostics,
            "density": to_json(&density),
        }),
    })
}

fn sample(config: &Config) -> CliResult<Output> {
    let initial = initial_state(config)?;
    let b = bath(config, config.temperature, config.exposure)?;
    let samples = sample_trajectories(&initial, &b, config.samples, config.seed)?;
    let (mean, variance) = mean_variance(&samples);
    let exact = evolve_gaussian(&initial, &b);
    Ok(Output {
        columns: cols(&["P"]),
        rows: samples.iter().map(|&p| vec![Cell::Num(p)]).collect(),
        json: json!({
            "sample_mean": mean,
            "sample_variance": variance,
            "predicted_mean": exact.mean,
            "predicted_variance": exact.variance,
            "samples": samples,
        }),
    })
}

fn fisher_report(config: &Config, initial: &GaussianMomentumState, b: &BathStage) -> CliResult<FisherReport> {
    Ok(match config.fisher_method {
        FisherMethodSpec::Gaussian => fi_gaussian(initial, b)?,
        FisherMethodSpec::General => fi_general_closed(initial, b)?,
        FisherMethodSpec::Numeric => fi_numeric(initial, b, NumericFisherOptions::default())?,
        FisherMethodSpec::Asymptotic => fi_asymptotic(config.asymptotic_case, initial, b)?,
    })
}

fn fisher(config: &Config) -> CliResult<Output> {
    let initial = initial_state(config)?;
    let b = bath(config, config.temperature, config.exposure)?;
    let report = fisher_report(config, &initial, &b)?;
    let crb = cramer_rao(&report, 1)?;
    Ok(Output {
        columns: cols(&["method", "fisher_information", "crb"]),
        rows: vec![vec![Cell::Text(method_name(config)), Cell::Num(report.value), Cell::Num(crb)]],
        json: to_json(&report),
    })
}

fn method_name(config: &Config) -> String {
    match to_json(&config.fisher_method) {
        Value::String(s) => s,
        other => other.to_string(),
    }
}

fn estimate(config: &Config) -> CliResult<Output> {
    let protocol = Protocol::at_relaxation_time(initial_state(config)?, law(config)?, config.impurity_mass, config.temperature, config.exposure)?;
    let report = mc_experiment(&McConfig {
        estimator: config.estimator,
        protocol,
        true_temperature: config.temperature,
        trials: config.trials,
        samples_per_trial: config.samples_per_trial,
        seed: config.seed,
    })?;
    let estimator = match to_json(&report.estimator) {
        Value::String(s) => s,
        other => other.to_string(),
    };
    let optional = |v: Option<f64>| v.map(Cell::Num).unwrap_or(Cell::Text(String::new()));
    Ok(Output {
        columns: cols(&[
            "estimator",
            "true_temperature",
            "trials",
            "samples_per_trial",
            "successful_trials",
            "censored_trials",
            "estimate_mean",
            "empirical_mse",
            "empirical_mse_stderr",
            "predicted_error",
            "crb",
            "mse_over_crb",
        ]),
        rows: vec![vec![
            Cell::Text(estimator),
            Cell::Num(report.true_temperature),
            Cell::Int(report.trials as u64),
            Cell::Int(report.samples_per_trial as u64),
            Cell::Int(report.successful_trials as u64),
            Cell::Int(report.censored_trials as u64),
            Cell::Num(report.estimate_mean),
            Cell::Num(report.empirical_mse),
            Cell::Num(report.empirical_mse_stderr),
            optional(report.predicted_error),
            Cell::Num(report.crb),
            Cell::Num(report.mse_over_crb),
        ]],
        json: to_json(&report),
    })
}

fn two_bath(config: &Config) -> CliResult<Output> {
    let initial = initial_state(config)?;
    let first = bath(config, config.temperature, config.exposure)?;
    let second = bath(config, config.second_temperature, config.second_exposure)?;
    let chi = fisher_matrix_two_bath(&initial, &first, &second)?;
    let bound = chi.trace_bound.unwrap_or(f64::NAN);
    Ok(Output {
        columns: cols(&["chi11", "chi12", "chi22", "trace_bound"]),
        rows: vec![vec![Cell::Num(chi.chi11), Cell::Num(chi.chi12), Cell::Num(chi.chi22), Cell::Num(bound)]],
        json: to_json(&chi),
    })
}

fn figure1(config: &Config) -> CliResult<Output> {
    if config.figure1_points == 0 || !(config.figure1_span > 0.0) {
        return Err(CliError::config("figure1 needs at least one point and a positive span"));
    }
    let initial = initial_state(config)?;
    let mut rows = Vec::new();
    let mut curves = Vec::new();
    for &t in &config.figure1_temperatures {
        let at_tau = bath(config, t, 1.0)?;
        let reference = fi_gaussian(&initial, &at_tau)?.value;
        let mut ratios = Vec::with_capacity(config.figure1_points);
        let mut times = Vec::with_capacity(config.figure1_points);
        for i in 1..=config.figure1_points {
            let multiple = config.figure1_span * i as f64 / config.figure1_points as f64;
            let gamma = fi_gaussian(&initial, &at_tau.with_duration(multiple * at_tau.relaxation_time()))?.value / reference;
            rows.push(vec![Cell::Num(t), Cell::Num(multiple), Cell::Num(gamma)]);
            times.push(multiple);
            ratios.push(gamma);
        }
        let max = ratios.iter().copied().fold(f64::MIN, f64::max);
        curves.push(json!({"temperature": t, "max_gamma": max, "t_over_tau": times, "gamma": ratios}));
    }
    Ok(Output {
        columns: cols(&["temperature", "t_over_tau", "gamma"]),
        rows,
        json: json!({ "curves": curves }),
    })
}

fn sweep(config: &Config) -> CliResult<Output> {
    let values = parse_grid(&config.sweep_grid)?;
    let results: Vec<CliResult<(f64, f64)>> = values
        .par_iter()
        .map(|&v| {
            let mut point = config.clone();
            match config.sweep_parameter {
                SweepParameter::Temperature => point.temperature = v,
                SweepParameter::Exposure => point.exposure = v,
                SweepParameter::InitialMomentum => point.initial_momentum = v,
                SweepParameter::InitialWidth => point.initial_width = v,
            }
            let report = fisher_report(&point, &initial_state(&point)?, &bath(&point, point.temperature, point.exposure)?)?;
            Ok((report.value, cramer_rao(&report, 1)?))
        })
        .collect();
    // the first failing grid point by index decides the error
    let results = results.into_iter().collect::<CliResult<Vec<_>>>()?;
    let column = config.sweep_parameter.column();
    let rows = values
        .iter()
        .zip(&results)
        .enumerate()
        .map(|(i, (&v, &(fi, crb)))| vec![Cell::Int(i as u64), Cell::Num(v), Cell::Num(fi), Cell::Num(crb)])
        .collect();
    let points: Vec<Value> = values
        .iter()
        .zip(&results)
        .enumerate()
        .map(|(i, (&v, &(fi, crb)))| json!({"index": i, "value": v, "fisher_information": fi, "crb": crb}))
        .collect();
    Ok(Output {
        columns: cols(&["index", column, "fisher_information", "crb"]),
        rows,
        json: json!({ "parameter": column, "method": method_name(config), "points": points }),
    })
}

fn cols(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}
