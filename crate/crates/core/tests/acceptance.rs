//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
//!
//! Criteria that are not attainable with a faithful implementation are left
//! failing and print the measured numbers.

use std::f64::consts::E;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use impurity_thermometry::estimators::{mc_experiment, predict_error_kinetic, predict_error_momentum, EstimatorKind, McConfig, Protocol};
use impurity_thermometry::fisher::{
    fi_asymptotic, fi_gaussian, fi_general_closed, fi_numeric, fisher_matrix_two_bath, relative_difference, trace_bound_limit,
    AsymptoticCase, NumericFisherOptions,
};
use impurity_thermometry::fit::{fit_power_law, log_space};
use impurity_thermometry::friction::{friction_force_integral, gamma_coefficient};
use impurity_thermometry::propagator::{evolve_fdm, evolve_gaussian, evolve_spectral, sample_trajectories, DEFAULT_GRID_POINTS};
use impurity_thermometry::quadrature::QuadratureOptions;
use impurity_thermometry::stats::{ks_critical_1pct, ks_statistic};
use impurity_thermometry::{BathStage, FrictionLaw, GaussianMomentumState, GridDensity, MomentumGrid, PhysicalParams, ReflectionModel, Regime};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn law4() -> FrictionLaw {
    FrictionLaw::new(1.0, 4).unwrap()
}

fn friction_asymptotics() -> Outcome {
    let params = PhysicalParams::natural(20.0, 0.1).unwrap();
    let temperature = params.temperature_from_reduced(1e-2);
    let opts = QuadratureOptions::default();
    let momentum = 1.0;

    let unit = friction_force_integral(momentum, &params, &ReflectionModel::Unit, temperature, opts).unwrap();
    let high = -gamma_coefficient(&params, Regime::StrongHigh).rate(temperature) * momentum;
    let unit_err = relative_difference(unit, high);

    let quadratic = ReflectionModel::calibrated_quadratic(&params, Regime::Weak).unwrap();
    let weak_f = friction_force_integral(momentum, &params, &quadratic, temperature, opts).unwrap();
    let weak = -gamma_coefficient(&params, Regime::Weak).rate(temperature) * momentum;
    let weak_err = relative_difference(weak_f, weak);

    outcome(
        unit_err < 0.01 && weak_err < 0.02,
        format!("unit reflection off by {:.3}% (< 1%), quadratic off by {:.3}% (< 2%)", 100.0 * unit_err, 100.0 * weak_err),
    )
}

fn propagator_agreement() -> Outcome {
    let initial = GaussianMomentumState::from_width(1.0, 0.4).unwrap();
    let mut worst_sup: f64 = 0.0;
    let mut worst_l1: f64 = 0.0;
    let mut worst_ks = (0.0, 1.0);
    let mut failures = Vec::new();
    for (i, multiple) in [0.1, 1.0, 3.0].into_iter().enumerate() {
        let bath = BathStage::in_relaxation_times(1.0, law4(), multiple, 1.0).unwrap();
        let exact_state = evolve_gaussian(&initial, &bath);
        let grid = MomentumGrid::covering(&initial, bath.thermal_variance(), DEFAULT_GRID_POINTS);
        let exact = GridDensity::from_state(&exact_state, grid).unwrap();

        match evolve_spectral(&initial, &bath, 200, grid) {
            Ok(spectral) => worst_sup = worst_sup.max(spectral.sup_distance(&exact)),
            Err(e) => failures.push(format!("spectral at {multiple} tau: {e}")),
        }

        let start = GridDensity::from_state(&initial, grid).unwrap();
        match evolve_fdm(&start, &bath, bath.relaxation_time() / 2000.0) {
            Ok(fdm) => worst_l1 = worst_l1.max(fdm.density.l1_distance(&exact)),
            Err(e) => failures.push(format!("fdm at {multiple} tau: {e}")),
        }

        let samples = sample_trajectories(&initial, &bath, 1_000_000, 20 + i as u64).unwrap();
        let d = ks_statistic(&samples, |p| exact_state.cdf(p));
        if d > worst_ks.0 {
            worst_ks = (d, ks_critical_1pct(samples.len()));
        }
    }
    let pass = failures.is_empty() && worst_sup < 1e-6 && worst_l1 < 1e-4 && worst_ks.0 < worst_ks.1;
    let mut detail = format!(
        "t in {{0.1, 1, 3}} tau: spectral sup {:.2e} (< 1e-6), fdm L1 {:.2e} (< 1e-4), KS {:.2e} (< {:.2e})",
        worst_sup, worst_l1, worst_ks.0, worst_ks.1
    );
    for f in failures {
        detail.push_str(&format!("; {f}"));
    }
    outcome(pass, detail)
}

fn short_exposure_constant() -> Outcome {
    let temperature = 0.1;
    let bath = BathStage::in_relaxation_times(temperature, law4(), 1e-3, 1.0).unwrap();
    let sharp = GaussianMomentumState::delta(0.0);
    let limit = fi_asymptotic(AsymptoticCase::LowTDeltaZero, &sharp, &bath).unwrap().value * temperature * temperature;
    let nearly_sharp = GaussianMomentumState::from_width(0.0, 1e-8 * temperature).unwrap();
    let numeric = fi_numeric(&nearly_sharp, &bath, NumericFisherOptions::default()).unwrap().value * temperature * temperature;
    let err = relative_difference(numeric, limit);
    outcome(
        (limit - 12.5).abs() < 1e-9 && err < 0.02,
        format!("limit FI*T^2 = {limit:.6} (12.5), quadrature FI*T^2 = {numeric:.4}, off by {:.3}% (< 2%)", 100.0 * err),
    )
}

fn tau_scaling_laws() -> Outcome {
    let temps = log_space(1e-3, 1e-1, 21);
    let fi_at_tau = |width: f64| -> Vec<f64> {
        let state = GaussianMomentumState::from_width(1.0, width).unwrap();
        temps
            .iter()
            .map(|&t| fi_gaussian(&state, &BathStage::in_relaxation_times(t, law4(), 1.0, 1.0).unwrap()).unwrap().value)
            .collect()
    };
    let sharp = fit_power_law(&temps, &fi_at_tau(0.0)).unwrap();
    let expected_prefactor = 16.0 / (E * E - 1.0);
    let prefactor_err = relative_difference(sharp.prefactor, expected_prefactor);
    let broad = fit_power_law(&temps, &fi_at_tau(100.0)).unwrap();
    let pass = (sharp.exponent + 3.0).abs() <= 0.02 && prefactor_err <= 0.01 && (broad.exponent + 2.0).abs() <= 0.02;
    outcome(
        pass,
        format!(
            "sharp: slope {:.4} (-3 +/- 0.02), prefactor {:.4} vs {:.4} off by {:.2}% (< 1%); broad (width 100): slope {:.4} (-2 +/- 0.02)",
            sharp.exponent,
            sharp.prefactor,
            expected_prefactor,
            100.0 * prefactor_err,
            broad.exponent
        ),
    )
}

fn reciprocity() -> Outcome {
    let temperature = 0.1;
    let momentum = Protocol::at_relaxation_time(GaussianMomentumState::delta(1.0), law4(), 1.0, temperature, 1.0).unwrap();
    let bath = momentum.bath(temperature).unwrap();
    let eq_mean = fi_asymptotic(AsymptoticCase::TauDeltaZero, &momentum.initial, &bath).unwrap().value;
    let product_mean = predict_error_momentum(&momentum, temperature).unwrap() * eq_mean;

    let kinetic = Protocol::at_relaxation_time(GaussianMomentumState::delta(0.0), law4(), 1.0, temperature, 1.0).unwrap();
    let eq_kinetic = fi_asymptotic(AsymptoticCase::TauP0Zero, &kinetic.initial, &bath).unwrap().value;
    let product_kinetic = predict_error_kinetic(&kinetic, temperature).unwrap() * eq_kinetic;

    let (a, b) = ((product_mean - 1.0).abs(), (product_kinetic - 1.0).abs());
    outcome(a <= 1e-12 && b <= 1e-12, format!("momentum |product - 1| = {a:.1e}, kinetic |product - 1| = {b:.1e} (<= 1e-12)"))
}

fn kinetic_long_time() -> Outcome {
    let temperature = 0.2;
    let protocol = Protocol::at_relaxation_time(GaussianMomentumState::delta(0.0), law4(), 1.0, temperature, 50.0).unwrap();
    let predicted = predict_error_kinetic(&protocol, temperature).unwrap();
    let limit = 2.0 * temperature * temperature;
    let prediction_err = relative_difference(predicted, limit);

    // 10^4 trials of 10 readings: 10^5 samples in total
    let report = mc_experiment(&McConfig {
        estimator: EstimatorKind::KineticEnergy,
        protocol,
        true_temperature: temperature,
        trials: 10_000,
        samples_per_trial: 10,
        seed: 6,
    })
    .unwrap();
    let per_sample = report.empirical_mse * report.samples_per_trial as f64;
    let mc_err = relative_difference(per_sample, limit);
    outcome(
        prediction_err <= 1e-6 && mc_err <= 0.05 && report.censored_trials == 0,
        format!(
            "prediction off by {prediction_err:.1e} (<= 1e-6); Monte Carlo per-sample variance {per_sample:.5} vs {limit:.5}, off by {:.2}% (<= 5%), {} censored",
            100.0 * mc_err,
            report.censored_trials
        ),
    )
}

fn crb_attainment() -> Outcome {
    let temperature = 0.1;
    let protocol = Protocol::at_relaxation_time(GaussianMomentumState::delta(1.0), law4(), 1.0, temperature, 1.0).unwrap();
    let report = mc_experiment(&McConfig {
        estimator: EstimatorKind::MomentumMean,
        protocol,
        true_temperature: temperature,
        trials: 10_000,
        samples_per_trial: 1000,
        seed: 7,
    })
    .unwrap();
    let ratio = report.mse_over_crb;
    let stat = report.empirical_mse_stderr / report.crb;
    outcome(
        (0.95..=1.15).contains(&ratio),
        format!("MSE / CRB = {ratio:.4} +/- {stat:.4} (in [0.95, 1.15]), {} censored", report.censored_trials),
    )
}

fn two_bath_ratio(temperature: f64, exponent: u32) -> f64 {
    let law = FrictionLaw::new(1.0, exponent).unwrap();
    let stage = BathStage::in_relaxation_times(temperature, law, 1.0, 1.0).unwrap();
    let chi = fisher_matrix_two_bath(&GaussianMomentumState::delta(1.0), &stage, &stage).unwrap();
    chi.trace_bound.unwrap() / (temperature * temperature)
}

fn two_bath_constant() -> Outcome {
    let target = 6.89625;
    let temps = [1e-1, 1e-2, 1e-3];
    let ratios: Vec<f64> = temps.iter().map(|&t| two_bath_ratio(t, 4)).collect();
    let quartic_ok = temps.iter().zip(&ratios).filter(|(t, _)| **t <= 1e-2).all(|(_, r)| relative_difference(*r, target) <= 1e-3);
    let spread = {
        let hi = ratios.iter().copied().fold(f64::MIN, f64::max);
        let lo = ratios.iter().copied().fold(f64::MAX, f64::min);
        (hi - lo) / lo
    };
    let quadratic: Vec<f64> = temps.iter().map(|&t| two_bath_ratio(t, 2)).collect();
    let fmt = |v: &[f64]| v.iter().map(|r| format!("{r:.5}")).collect::<Vec<_>>().join(", ");
    let mut detail = format!(
        "n=4 bound/T^2 at T = 1e-1, 1e-2, 1e-3: {} (target {target}, limit 4 coth^2(1) = {:.5}); spread {:.2}% (< 1%); n=2: {}",
        fmt(&ratios),
        trace_bound_limit(),
        100.0 * spread,
        fmt(&quadratic)
    );
    if !quartic_ok {
        detail.push_str("; flagged: n=4 misses the constant within 0.1% at T = 1e-2");
    }
    outcome(quartic_ok && spread <= 0.01, detail)
}

fn gamma_curve_max(temperature: f64) -> f64 {
    let initial = GaussianMomentumState::delta(1.0);
    let at_tau = BathStage::in_relaxation_times(temperature, law4(), 1.0, 1.0).unwrap();
    let reference = fi_gaussian(&initial, &at_tau).unwrap().value;
    // t = 0 leaves a delta state with no information; the grid starts one step in
    (1..=500)
        .map(|i| {
            let bath = at_tau.with_duration(5.0 * at_tau.relaxation_time() * i as f64 / 500.0);
            fi_gaussian(&initial, &bath).unwrap().value / reference
        })
        .fold(f64::MIN, f64::max)
}

fn gamma_curve_properties() -> Outcome {
    let maxima: Vec<f64> = [0.3, 0.2, 0.1].into_iter().map(gamma_curve_max).collect();
    let bounded = maxima.iter().all(|&g| g <= 1.01);
    let increasing = maxima.windows(2).all(|w| w[1] > w[0]);
    outcome(
        bounded && increasing,
        format!(
            "max gamma at T = 0.3, 0.2, 0.1: {:.4}, {:.4}, {:.4}; bounded by 1.01: {bounded}; increasing: {increasing}",
            maxima[0], maxima[1], maxima[2]
        ),
    )
}

fn oracle_triangle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    let mut flagged = 0;
    for _ in 0..100 {
        let temperature = rng.random_range(0.05..2.0);
        let exponent = if rng.random_bool(0.5) { 2 } else { 4 };
        let law = FrictionLaw::new(rng.random_range(0.5..2.0), exponent).unwrap();
        let mass = rng.random_range(0.5..3.0);
        let exposure = rng.random_range(0.1..3.0);
        let width = if rng.random_bool(0.2) { 0.0 } else { rng.random_range(0.0..3.0) };
        let state = GaussianMomentumState::from_width(rng.random_range(-2.0..2.0), width).unwrap();
        let bath = BathStage::in_relaxation_times(temperature, law, exposure, mass).unwrap();

        let numeric = fi_numeric(&state, &bath, NumericFisherOptions::default()).unwrap().value;
        let gaussian = fi_gaussian(&state, &bath).unwrap().value;
        let general = fi_general_closed(&state, &bath).unwrap().value;
        let d = relative_difference(numeric, gaussian)
            .max(relative_difference(numeric, general))
            .max(relative_difference(gaussian, general));
        if d > 1e-4 {
            flagged += 1;
        }
        worst = worst.max(d);
    }
    outcome(flagged == 0, format!("100 draws, worst pairwise difference {worst:.2e} (< 1e-4), {flagged} disagreements"))
}

type Check = fn() -> Outcome;

fn main() -> ExitCode {
    let criteria: [(&str, Check, Option<Duration>); 10] = [
        ("friction asymptotics", friction_asymptotics, Some(Duration::from_secs(1))),
        ("propagator four-way agreement", propagator_agreement, Some(Duration::from_secs(30))),
        ("short-exposure constant", short_exposure_constant, None),
        ("relaxation-time scaling laws", tau_scaling_laws, None),
        ("error-propagation reciprocity", reciprocity, None),
        ("kinetic long-time limit", kinetic_long_time, None),
        ("Cramer-Rao attainment", crb_attainment, Some(Duration::from_secs(60))),
        ("two-bath constant", two_bath_constant, None),
        ("gamma-curve properties", gamma_curve_properties, None),
        ("oracle triangle", oracle_triangle, Some(Duration::from_secs(10))),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut result = check();
        let elapsed = start.elapsed();
        if let Some(budget) = budget {
            if elapsed > budget {
                result.pass = false;
                result.detail.push_str(&format!("; over time budget {budget:?}"));
            }
        }
        let tag = if result.pass { "PASS" } else { "FAIL" };
        if !result.pass {
            failed += 1;
        }
        println!("{tag} criterion {:>2} {name}: {} [{:.2} s]", i + 1, result.detail, elapsed.as_secs_f64());
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
