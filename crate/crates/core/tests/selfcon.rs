// SPDX-License-Identifier: MIT OR Apache-2.0

mod common;

use common::{gaussian_vec, median, mse, rng};
use wavesc_core::bench::{apply_snr, make_missing, metrics, MissingKind, TestFunction};
use wavesc_core::selfcon::{
    conditional_mean_hard, estimate, initial_estimate, run_misc, run_ref, run_sim, EtaMode, Init,
    Method, NoiseFamily, ObservationSet, SelfConConfig,
};
use wavesc_core::shrinkage::{mad_sigma, GaussianShrinker, ThresholdPolicy};
use wavesc_core::transform::irregularity_map;
use wavesc_core::{Grid, Transform};

struct Data {
    truth: Vec<f64>,
    y: Vec<f64>,
    obs: ObservationSet,
}

fn noisy(f: TestFunction, n: usize, cm: f64, seed: u64) -> Data {
    let truth = f.sample(n).unwrap();
    let sigma = apply_snr(&truth, 7.0).unwrap();
    let mut r = rng(seed);
    let y: Vec<f64> = truth
        .iter()
        .zip(gaussian_vec(&mut r, n))
        .map(|(a, z)| a + sigma * z)
        .collect();
    let mask = make_missing(Grid::Line(n), cm, MissingKind::Random, seed).unwrap();
    let obs = ObservationSet::from_mask(Grid::Line(n), &mask, &y).unwrap();
    Data { truth, y, obs }
}

#[test]
fn sim_trajectory_decreases_then_flattens() {
    let d = noisy(TestFunction::Heavisine, 2048, 0.3, 41);
    let rep = estimate(
        &d.obs,
        &SelfConConfig::default(),
        Method::Sim,
        Some(&d.truth),
    )
    .unwrap();
    assert!(rep.converged);
    let traj = rep.mse_obs.unwrap();
    assert!(traj.len() >= 2);
    let first = traj[0];
    let last = *traj.last().unwrap();
    assert!(last <= first, "{traj:?}");
    let n = traj.len();
    let tail_change = (traj[n - 1] - traj[n - 2]).abs() / traj[n - 1];
    assert!(tail_change < 0.05, "{traj:?}");
    assert_eq!(rep.mrss_obs.len(), rep.iterations);
    assert_eq!(rep.sigma_trajectory.len(), rep.iterations);
}

#[test]
fn inflation_helps_at_half_missing() {
    let mut with = Vec::new();
    let mut without = Vec::new();
    for seed in 0..20 {
        let d = noisy(TestFunction::Heavisine, 2048, 0.5, 100 + seed);
        let a = run_sim(&d.obs, &SelfConConfig::default()).unwrap();
        let naive = SelfConConfig {
            inflate: false,
            ..SelfConConfig::default()
        };
        let b = run_sim(&d.obs, &naive).unwrap();
        with.push(mse(&a.f_hat, &d.truth));
        without.push(mse(&b.f_hat, &d.truth));
    }
    assert!(median(&with) < median(&without));
}

#[test]
fn ref_update_shrinks_every_uncertain_coefficient() {
    let d = noisy(TestFunction::Heavisine, 512, 0.3, 42);
    let config = SelfConConfig::default();
    let t = Transform::new(config.wavelet, Grid::Line(512)).unwrap();
    let eta = irregularity_map(d.obs.mask(), &t).unwrap();
    let (f0, _) = initial_estimate(&d.obs, config.init, &t).unwrap();
    let w = t.forward(&d.obs.complete_with(&f0)).unwrap();
    let sigma = mad_sigma(&w).unwrap().sigma;
    let c = config.policy.threshold(sigma, 512).unwrap();
    let layout = t.layout();
    let mut strict = 0;
    let mut checked = 0;
    for (l, &wl) in w.values.iter().enumerate() {
        if layout.is_scaling(l) || wl == 0.0 || eta.eta_sq[l] <= 0.0 {
            continue;
        }
        let v = conditional_mean_hard(wl, eta.eta_sq[l], sigma, c);
        assert!(v.abs() <= wl.abs() && v * wl >= 0.0);
        checked += 1;
        strict += usize::from(v.abs() < wl.abs() && v != 0.0);
    }
    assert!(checked > 100);
    assert!(strict as f64 > 0.95 * checked as f64, "{strict}/{checked}");
}

#[test]
#[ignore = "not reproduced: MISC has the lower MSE_obs on about half of paired seeds (9 of these 20, 46 of 100)"]
fn misc_beats_sim_on_most_seeds() {
    let config = SelfConConfig::default();
    let shrinker = GaussianShrinker::new(config.policy);
    let mut wins = 0;
    for seed in 0..20 {
        let d = noisy(TestFunction::Heavisine, 2048, 0.5, 200 + seed);
        let cfg = SelfConConfig { seed, ..config };
        let misc = run_misc(&d.obs, &cfg, &shrinker, NoiseFamily::Gaussian).unwrap();
        let sim = run_sim(&d.obs, &cfg).unwrap();
        let mask = d.obs.mask();
        let m = metrics(&d.truth, &misc.f_hat, &d.y, mask).unwrap();
        let s = metrics(&d.truth, &sim.f_hat, &d.y, mask).unwrap();
        wins += usize::from(m.mse_obs <= s.mse_obs);
    }
    assert!(wins > 10, "MISC won {wins} of 20");
}

#[test]
fn engines_are_reproducible() {
    let d = noisy(TestFunction::Doppler, 256, 0.3, 43);
    let config = SelfConConfig {
        imputations: 20,
        seed: 5,
        ..SelfConConfig::default()
    };
    let shrinker = GaussianShrinker::new(ThresholdPolicy::adjusted_hard());
    assert_eq!(
        run_sim(&d.obs, &config).unwrap(),
        run_sim(&d.obs, &config).unwrap()
    );
    assert_eq!(
        run_ref(&d.obs, &config).unwrap(),
        run_ref(&d.obs, &config).unwrap()
    );
    let a = run_misc(&d.obs, &config, &shrinker, NoiseFamily::Gaussian).unwrap();
    let b = run_misc(&d.obs, &config, &shrinker, NoiseFamily::Gaussian).unwrap();
    assert_eq!(a, b);
    let other = SelfConConfig { seed: 6, ..config };
    let c = run_misc(&d.obs, &other, &shrinker, NoiseFamily::Gaussian).unwrap();
    assert_ne!(a.f_hat, c.f_hat);
}

#[test]
fn local_linear_start_beats_flat_fit() {
    let d = noisy(TestFunction::Heavisine, 1024, 0.3, 44);
    let t = Transform::new(SelfConConfig::default().wavelet, Grid::Line(1024)).unwrap();
    let (f0, s0) = initial_estimate(&d.obs, Init::LocalLinear { span: 0.1 }, &t).unwrap();
    let mean = d.y.iter().sum::<f64>() / d.y.len() as f64;
    let var_y = d.y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / d.y.len() as f64;
    assert!(mse(&f0, &d.truth) < var_y);
    assert!(s0.sigma > 0.0);
}

#[test]
fn exact_and_average_eta_agree_on_average() {
    let d = noisy(TestFunction::Heavisine, 512, 0.3, 45);
    let exact = run_ref(&d.obs, &SelfConConfig::default()).unwrap();
    let avg = run_ref(
        &d.obs,
        &SelfConConfig {
            eta_mode: EtaMode::Average,
            ..SelfConConfig::default()
        },
    )
    .unwrap();
    let e = exact.eta.unwrap();
    let a = avg.eta.unwrap();
    assert!((e.mean() - a.mean()).abs() < 1e-12);
    assert!(a.eta_sq.iter().all(|&v| v == d.obs.missing_fraction()));
}

#[test]
fn image_recovery_beats_mean_fill_on_clustered_holes() {
    let side = 64;
    let grid = Grid::Square(side);
    let truth = wavesc_core::bench::synthetic_image(side).unwrap();
    let sigma = apply_snr(&truth, 7.0).unwrap();
    let mut r = rng(46);
    let y: Vec<f64> = truth
        .iter()
        .zip(gaussian_vec(&mut r, side * side))
        .map(|(a, z)| a + sigma * z)
        .collect();
    let mask = make_missing(grid, 0.1, MissingKind::Clustered, 46).unwrap();
    let obs = ObservationSet::from_mask(grid, &mask, &y).unwrap();
    let config = SelfConConfig {
        policy: ThresholdPolicy::adjusted_hard(),
        eta_mode: EtaMode::Average,
        ..SelfConConfig::default()
    };
    let rep = run_ref(&obs, &config).unwrap();
    let m = metrics(&truth, &rep.f_hat, &y, &mask).unwrap();
    let fill = obs.y_obs().iter().sum::<f64>() / obs.n_observed() as f64;
    let baseline: f64 = mask
        .missing_indices()
        .iter()
        .map(|&i| (truth[i] - fill) * (truth[i] - fill))
        .sum::<f64>()
        / mask.n_missing() as f64;
    let mis = m.mse_mis.unwrap();
    assert!(mis.is_finite() && mis < baseline, "{mis} vs {baseline}");
}
