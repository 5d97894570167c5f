use approx::assert_relative_eq;
use impurity_thermometry::propagator::{
    compose_baths, evolve_fdm, evolve_gaussian, evolve_spectral, sample_protocol, sample_trajectories,
};
use impurity_thermometry::stats::{ks_critical_1pct, ks_statistic, mean_variance};
use impurity_thermometry::{BathStage, FrictionLaw, GaussianMomentumState, GridDensity, MomentumGrid};
use proptest::prelude::*;

fn bath(t: f64, multiple: f64, m: f64) -> BathStage {
    BathStage::in_relaxation_times(t, FrictionLaw::new(1.0, 4).unwrap(), multiple, m).unwrap()
}

#[test]
fn methods_agree_on_a_broad_state() {
    let initial = GaussianMomentumState::from_width(-0.6, 1.5).unwrap();
    for multiple in [0.1, 1.0, 3.0] {
        let b = bath(0.8, multiple, 2.0);
        let exact_state = evolve_gaussian(&initial, &b);
        let grid = MomentumGrid::covering(&initial, b.thermal_variance(), 1024);
        let exact = GridDensity::from_state(&exact_state, grid).unwrap();
        let spectral = evolve_spectral(&initial, &b, 120, grid).unwrap();
        assert!(spectral.sup_distance(&exact) < 1e-6);
        let fdm = evolve_fdm(&GridDensity::from_state(&initial, grid).unwrap(), &b, b.relaxation_time() / 1000.0).unwrap();
        assert!(fdm.density.l1_distance(&exact) < 1e-4, "L1 {}", fdm.density.l1_distance(&exact));
        assert!(fdm.max_mass_drift < 1e-12);
        assert!(fdm.min_value >= 0.0);
        let samples = sample_trajectories(&initial, &b, 200_000, 3).unwrap();
        assert!(ks_statistic(&samples, |p| exact_state.cdf(p)) < ks_critical_1pct(samples.len()));
    }
}

#[test]
fn every_method_reaches_equipartition() {
    let (m, t) = (1.5, 0.6);
    let initial = GaussianMomentumState::from_width(2.0, 0.3).unwrap();
    let b = bath(t, 20.0, m);
    let thermal = m * t;

    assert_relative_eq!(evolve_gaussian(&initial, &b).variance, thermal, max_relative = 1e-3);
    let grid = MomentumGrid::covering(&initial, thermal, 1024);
    let spectral = evolve_spectral(&initial, &b, 64, grid).unwrap();
    assert_relative_eq!(spectral.variance(), thermal, max_relative = 1e-3);
    let fdm = evolve_fdm(&GridDensity::from_state(&initial, grid).unwrap(), &b, b.relaxation_time() / 50.0).unwrap();
    assert_relative_eq!(fdm.density.variance(), thermal, max_relative = 1e-3);
    let samples = sample_trajectories(&initial, &b, 400_000, 8).unwrap();
    let (_, var) = mean_variance(&samples);
    assert_relative_eq!(var, thermal, max_relative = 1e-2);
}

#[test]
fn fdm_semigroup_within_solver_tolerance() {
    let initial = GaussianMomentumState::from_width(1.0, 0.5).unwrap();
    let whole = bath(1.0, 1.0, 1.0);
    let half = whole.with_duration(whole.duration / 2.0);
    let grid = MomentumGrid::covering(&initial, 1.0, 1024);
    let start = GridDensity::from_state(&initial, grid).unwrap();
    let dt = whole.duration / 1000.0;
    let direct = evolve_fdm(&start, &whole, dt).unwrap().density;
    let first = evolve_fdm(&start, &half, dt).unwrap().density;
    let twice = evolve_fdm(&first, &half, dt).unwrap().density;
    assert!(direct.l1_distance(&twice) < 1e-5, "{}", direct.l1_distance(&twice));
}

#[test]
fn staged_sampling_matches_composed_gaussian() {
    let initial = GaussianMomentumState::delta(1.2);
    let stages = [bath(0.5, 0.7, 1.0), bath(0.2, 1.3, 1.0)];
    let exact = compose_baths(&initial, &stages).unwrap();
    let samples = sample_protocol(&initial, &stages, 300_000, 12).unwrap();
    assert!(ks_statistic(&samples, |p| exact.cdf(p)) < ks_critical_1pct(samples.len()));
}

#[test]
fn grid_density_csv_round_trip() {
    let state = GaussianMomentumState::new(0.3, 0.2).unwrap();
    let density = GridDensity::from_state(&state, MomentumGrid::new(-3.0, 3.0, 65).unwrap()).unwrap();
    let mut buf = Vec::new();
    density.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("P,f\n"));
    let back = GridDensity::read_csv(&text).unwrap();
    assert_eq!(back, density);
}

proptest! {
    #[test]
    fn mean_decays_independently_of_width(p0 in -3.0..3.0f64, w1 in 0.0..4.0f64, w2 in 0.0..4.0f64, x in 0.0..6.0f64, t in 0.1..2.0f64) {
        let b = bath(t, x, 1.0);
        let a = evolve_gaussian(&GaussianMomentumState::from_width(p0, w1).unwrap(), &b);
        let c = evolve_gaussian(&GaussianMomentumState::from_width(p0, w2).unwrap(), &b);
        prop_assert_eq!(a.mean, c.mean);
        prop_assert!((a.mean - p0 * (-x).exp()).abs() <= 1e-14 * p0.abs().max(1e-300));
    }

    #[test]
    fn gaussian_semigroup(p0 in -3.0..3.0f64, v in 0.0..3.0f64, x1 in 0.0..3.0f64, x2 in 0.0..3.0f64) {
        let initial = GaussianMomentumState::new(p0, v).unwrap();
        let one = bath(0.7, x1, 1.3);
        let two = bath(0.7, x2, 1.3);
        let split = evolve_gaussian(&evolve_gaussian(&initial, &one), &two);
        let joint = evolve_gaussian(&initial, &bath(0.7, x1 + x2, 1.3));
        prop_assert!((split.mean - joint.mean).abs() <= 1e-12);
        prop_assert!((split.variance - joint.variance).abs() <= 1e-12);
    }
}
