use std::collections::BTreeMap;

use faer::complex_native::c64;
use faer::Mat;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use super::scan::displacement_for_tests;
use super::*;
use crate::cascade::verify_ehrenfest;
use crate::classical::catalog;
use crate::fock::{evolve, liouvillian, position, steady_state, EvolveOptions, GridSpec};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn damped(kappa: f64) -> Lindbladian {
    Lindbladian::from_hamiltonian(NormalOrderedPolynomial::monomial(1, 1, c(1.0, 0.0)))
        .with_dissipator(kappa, NormalOrderedPolynomial::a())
}

fn fitzhugh_nagumo() -> Lindbladian {
    catalog("fitzhugh_nagumo", &BTreeMap::new()).unwrap().published.unwrap()
}

fn max_diff(a: &Mat<c64>, b: &Mat<c64>) -> f64 {
    let mut m = 0.0_f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max((a.read(i, j) - b.read(i, j)).abs());
        }
    }
    m
}

#[test]
fn ito_form_without_noise_is_base() {
    let base = fitzhugh_nagumo();
    let g = NoisyGenerator::new(base.clone(), 0.0).unwrap();
    assert_eq!(ito_form(&g), base);
}

#[test]
fn ito_correction_is_kappa_squared_position_dephasing() {
    let kappa = 0.7;
    let base = damped(0.3);
    let g = NoisyGenerator::new(base.clone(), kappa).unwrap();
    let n = 8;
    let lhs = liouvillian(&ito_form(&g), n) - liouvillian(&base, n);
    let rhs = liouvillian(&Lindbladian::new().with_dissipator(kappa * kappa, position()), n);
    assert!(max_diff(&lhs, &rhs) < 1e-12);
}

#[test]
fn averaged_channel_leaves_the_drift_unchanged() {
    let base = fitzhugh_nagumo();
    let g = NoisyGenerator::new(base.clone(), 0.243).unwrap();
    let avg = ito_form(&g);
    assert_eq!(avg.dissipators.len(), base.dissipators.len() + 1);
    let h = crate::classical::catalog("fitzhugh_nagumo", &BTreeMap::new())
        .unwrap()
        .system
        .to_complex();
    assert!(verify_ehrenfest(&avg, &h).unwrap().passes(1e-12));
}

#[test]
fn negative_or_nan_kappa_is_rejected() {
    assert!(NoisyGenerator::new(Lindbladian::new(), -0.1).is_err());
    assert!(NoisyGenerator::new(Lindbladian::new(), f64::NAN).is_err());
}

#[test]
fn noiseless_run_matches_deterministic_evolution() {
    let l = damped(0.5);
    let rho0 = DensityMatrix::coherent(12, c(1.0, 0.5));
    let g = NoisyGenerator::new(l.clone(), 0.0).unwrap();
    let cfg = RunConfig {
        save_every: 100,
        ..RunConfig::default()
    };
    let run = stratonovich_run(&g, &rho0, 1.0, &cfg).unwrap();
    assert_eq!(run.times.len(), 11);
    let opts = EvolveOptions {
        save_times: run.times.clone(),
        ..EvolveOptions::default()
    };
    let exact = evolve(&l, &rho0, 1.0, &opts).unwrap();
    for (a, b) in run.states.iter().zip(&exact.states) {
        assert!(a.max_abs_diff(b) < 1e-6, "{}", a.max_abs_diff(b));
    }
}

#[test]
fn noise_term_is_trace_free() {
    let g = NoisyGenerator::new(Lindbladian::new(), 1.3).unwrap();
    let stepper = Stepper::new(&g, 9);
    let rho = DensityMatrix::coherent(9, c(0.4, -1.1));
    let b = stepper.noise(rho.as_mat().as_ref());
    assert!(trace(&b).norm() < 1e-14);
    // Hermitian input gives a Hermitian increment.
    assert!(hermiticity_error(&b) < 1e-14);
}

#[test]
fn runs_are_bit_identical_and_trace_preserving() {
    let g = NoisyGenerator::new(damped(0.2), 0.4).unwrap();
    let rho0 = DensityMatrix::coherent(10, c(0.8, 0.0));
    let cfg = RunConfig {
        seed: 42,
        save_every: 50,
        ..RunConfig::default()
    };
    let a = stratonovich_run(&g, &rho0, 1.0, &cfg).unwrap();
    let b = stratonovich_run(&g, &rho0, 1.0, &cfg).unwrap();
    for (x, y) in a.states.iter().zip(&b.states) {
        assert_eq!(x.as_mat(), y.as_mat());
    }
    for s in &a.states {
        assert!((s.trace() - 1.0).norm() < 1e-10);
    }
    let other = stratonovich_run(&g, &rho0, 1.0, &RunConfig { seed: 43, ..cfg }).unwrap();
    assert!(other.states.last().unwrap().max_abs_diff(a.states.last().unwrap()) > 1e-6);
}

#[test]
fn increments_are_counter_based_and_standard() {
    let dt = 1e-3;
    assert_eq!(wiener_increment(7, 3, 100, dt), wiener_increment(7, 3, 100, dt));
    assert_ne!(wiener_increment(7, 3, 100, dt), wiener_increment(7, 4, 100, dt));
    assert_ne!(wiener_increment(7, 3, 100, dt), wiener_increment(7, 3, 101, dt));
    let n = 20_000;
    let xs: Vec<f64> = (0..n).map(|k| wiener_increment(1, 0, k, dt) / dt.sqrt()).collect();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
    // Five standard errors.
    assert!(mean.abs() < 5.0 / (n as f64).sqrt());
    assert!((var - 1.0).abs() < 5.0 * (2.0 / n as f64).sqrt());
}

#[test]
fn blow_up_is_reported() {
    let l = Lindbladian::from_hamiltonian(NormalOrderedPolynomial::monomial(2, 2, c(1.0, 0.0)))
        .with_dissipator(1.0, NormalOrderedPolynomial::monomial(0, 2, c(1.0, 0.0)));
    let g = NoisyGenerator::new(l, 1.0).unwrap();
    let cfg = RunConfig {
        dt: 1e300,
        ..RunConfig::default()
    };
    let err = stratonovich_run(&g, &DensityMatrix::coherent(8, c(1.0, 1.0)), 1e300, &cfg).unwrap_err();
    assert!(matches!(err, Error::Unstable { step: 1, .. }), "{err}");
}

#[test]
fn bad_run_config_is_rejected() {
    let g = NoisyGenerator::new(Lindbladian::new(), 0.1).unwrap();
    let rho = DensityMatrix::vacuum(4);
    for cfg in [
        RunConfig { dt: 0.0, ..RunConfig::default() },
        RunConfig { dt: f64::NAN, ..RunConfig::default() },
        RunConfig { save_every: 0, ..RunConfig::default() },
    ] {
        assert!(matches!(stratonovich_run(&g, &rho, 1.0, &cfg), Err(Error::InvalidArgument(_))));
    }
}

#[test]
fn small_ensemble_tracks_the_averaged_equation() {
    let g = NoisyGenerator::new(damped(0.5), 0.5).unwrap();
    let rho0 = DensityMatrix::coherent(10, c(1.0, 0.0));
    let cfg = RunConfig {
        dt: 2e-3,
        seed: 5,
        save_every: 100,
        ..RunConfig::default()
    };
    let stats = ensemble_expectation(&g, &rho0, 1.0, &cfg, 64, &position()).unwrap();
    let opts = EvolveOptions {
        save_times: stats.times.clone(),
        ..EvolveOptions::default()
    };
    let avg = evolve(&ito_form(&g), &rho0, 1.0, &opts).unwrap();
    for (k, rho) in avg.states.iter().enumerate().skip(1) {
        let want = crate::fock::expectation(rho, &position()).re;
        assert!(
            (stats.mean[k] - want).abs() < 4.0 * stats.sem[k],
            "t = {}: {} vs {want} (sem {})",
            stats.times[k],
            stats.mean[k],
            stats.sem[k]
        );
    }
    assert!(ensemble_expectation(&g, &rho0, 1.0, &cfg, 1, &position()).is_err());
}

#[test]
fn moment_check_linear_variance_growth() {
    let rho0 = DensityMatrix::coherent(60, c(0.7, -0.4));
    let r = noise_moment_check(0.3, &rho0, 5.0).unwrap();
    assert!(r.slope_error() < 0.01, "slope {}", r.var_y_slope);
    assert!(r.var_x_drift < 1e-6, "{}", r.var_x_drift);
    assert!(r.mean_drift < 1e-8, "{}", r.mean_drift);
    // Coherent states start at the vacuum variance 1/2.
    assert!((r.var_y[0] - 0.5).abs() < 1e-10);
    assert!((r.var_y.last().unwrap() - (0.5 + 0.09 * 5.0)).abs() < 1e-6);
}

#[test]
fn moment_check_without_noise_is_static() {
    let r = noise_moment_check(0.0, &DensityMatrix::coherent(20, c(0.5, 0.5)), 2.0).unwrap();
    assert!(r.slope_error() < 1e-12);
    assert!(r.var_x_drift < 1e-14 && r.mean_drift < 1e-14);
}

#[test]
fn periodic_train_has_zero_spread() {
    // Binary-exact sample times so intervals agree bit for bit.
    let times: Vec<f64> = (0..400).map(|i| i as f64 * 0.5).collect();
    let signal: Vec<f64> = (0..400).map(|i| (std::f64::consts::TAU * i as f64 / 20.0).sin()).collect();
    let s = spike_train_stats(&times, &signal, &DetectorConfig::default()).unwrap();
    assert_eq!(s.spike_times.len(), 20);
    assert_eq!(s.sigma_bar, 0.0);
    assert_eq!(s.mean, 10.0);
}

#[test]
fn exponential_intervals_give_unit_spread() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let exp = Exp::new(1.0).unwrap();
    let mut t = 0.0;
    let mut spikes = vec![t];
    for _ in 0..10_000 {
        t += exp.sample(&mut rng);
        spikes.push(t);
    }
    let s = SpikeStatistics::from_spike_times(spikes).unwrap();
    assert!((s.sigma_bar - 1.0).abs() < 0.1, "{}", s.sigma_bar);
}

#[test]
fn two_spikes_are_too_few() {
    let times: Vec<f64> = (0..40).map(f64::from).collect();
    let signal: Vec<f64> = (0..40).map(|i| (std::f64::consts::TAU * i as f64 / 20.0).sin()).collect();
    assert!(matches!(
        spike_train_stats(&times, &signal, &DetectorConfig::default()),
        Err(Error::TooFewSpikes(2))
    ));
    assert!(matches!(
        SpikeStatistics::from_spike_times(vec![0.0, 1.0, 1.0]),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn hysteresis_and_refractory_suppress_chatter() {
    let times: Vec<f64> = (0..12).map(f64::from).collect();
    // Rises above high, dips only to the middle band, rises again: one spike per excursion.
    let signal = [0.0, 1.0, 0.5, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0];
    let cfg = DetectorConfig {
        thresholds: Some((0.2, 0.8)),
        refractory: 0,
        ..DetectorConfig::default()
    };
    assert_eq!(detect_spikes(&times, &signal, &cfg).unwrap(), vec![1.0, 6.0, 8.0, 11.0]);
    let cfg = DetectorConfig { refractory: 2, ..cfg };
    assert_eq!(detect_spikes(&times, &signal, &cfg).unwrap(), vec![1.0, 6.0, 11.0]);
    let bad = DetectorConfig {
        thresholds: Some((1.0, 0.0)),
        ..DetectorConfig::default()
    };
    assert!(detect_spikes(&times, &signal, &bad).is_err());
    assert!(detect_spikes(&times[..3], &signal, &cfg).is_err());
}

#[test]
fn calibrated_thresholds() {
    let signal = [0.0, 4.0, 2.0, 2.0];
    let (lo, hi) = DetectorConfig::default().thresholds_for(&signal).unwrap();
    assert_eq!((lo, hi), (1.0, 3.0));
    let cfg = DetectorConfig {
        calibration_len: Some(2),
        ..DetectorConfig::default()
    };
    assert_eq!(cfg.thresholds_for(&signal).unwrap(), (1.0, 3.0));
}

proptest! {
    #[test]
    fn spread_is_invariant_under_time_rescaling(
        gaps in prop::collection::vec(0.1f64..5.0, 3..40),
        scale in 0.01f64..100.0,
    ) {
        let mut t = 0.0;
        let mut spikes = vec![t];
        for g in &gaps {
            t += g;
            spikes.push(t);
        }
        let a = SpikeStatistics::from_spike_times(spikes.clone()).unwrap();
        let b = SpikeStatistics::from_spike_times(spikes.iter().map(|s| s * scale).collect()).unwrap();
        prop_assert!(a.sigma_bar >= 0.0);
        prop_assert!((a.sigma_bar - b.sigma_bar).abs() < 1e-9 * (1.0 + a.sigma_bar));
    }
}

#[test]
fn displacement_of_vacuum_is_coherent() {
    let beta = c(0.3, -0.2);
    let n = 30;
    let d = displacement_for_tests(n, beta);
    let vac = DensityMatrix::vacuum(n);
    let out = DensityMatrix::from_mat(&d * vac.as_mat() * d.adjoint());
    let want = DensityMatrix::coherent(n, beta);
    assert!(out.max_abs_diff(&want) < 1e-12);
}

#[test]
fn biased_state_is_a_valid_shifted_steady_state() {
    let l = fitzhugh_nagumo();
    let n = 12;
    let ss = steady_state(&l, n).unwrap();
    assert_eq!(biased_initial_state(&l, n, 0.0).unwrap().as_mat(), ss.as_mat());
    let b = biased_initial_state(&l, n, 0.2).unwrap();
    b.validate(1e-10, 1e-10).unwrap();
    let shift = crate::fock::expectation(&b, &position()).re - crate::fock::expectation(&ss, &position()).re;
    assert!(shift > 0.0, "expected a shift toward positive x, got {shift}");
}

#[test]
fn steady_state_mode_is_constant_without_noise() {
    let l = damped(1.0);
    let rho = steady_state(&l, 6).unwrap();
    let g = NoisyGenerator::new(l, 0.0).unwrap();
    let cfg = RunConfig {
        save_every: 50,
        ..RunConfig::default()
    };
    let m = mode_trajectory(&g, &rho, 0.5, &cfg, &GridSpec::square(2.0, 41)).unwrap();
    assert_eq!(m.times.len(), 11);
    assert!(m.x.iter().all(|x| *x == m.x[0]) && m.y.iter().all(|y| *y == m.y[0]));
    assert!(m.to_csv().starts_with("t,x_star,y_star\n"));
}

#[test]
fn mode_trajectory_reruns_bit_identically() {
    let g = NoisyGenerator::new(damped(0.1), 0.5).unwrap();
    let rho = DensityMatrix::coherent(8, c(1.0, 0.0));
    let cfg = RunConfig {
        seed: 9,
        save_every: 20,
        ..RunConfig::default()
    };
    let grid = GridSpec::square(3.0, 31);
    let a = mode_trajectory(&g, &rho, 0.4, &cfg, &grid).unwrap();
    let b = mode_trajectory(&g, &rho, 0.4, &cfg, &grid).unwrap();
    assert_eq!(a, b);
}

#[test]
fn scan_rows_and_csv() {
    let l = damped(1.0);
    let rho = DensityMatrix::coherent(6, c(0.5, 0.0));
    let cfg = ScanConfig {
        t_final: 0.2,
        grid: GridSpec::square(2.0, 21),
        ..ScanConfig::default()
    };
    assert!(coherence_scan(&l, &[], &rho, &cfg).is_err());
    let rows = coherence_scan(&l, &[0.1], &rho, &cfg).unwrap();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].stats.is_none());
    let csv = scan_csv(&rows);
    assert!(csv.starts_with("kappa,sigma_bar,inv_sigma_bar,n_spikes\n0.1,NaN,NaN,"));
}
