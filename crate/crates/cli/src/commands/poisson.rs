// SPDX-License-Identifier: MIT OR Apache-2.0

use rand_distr::{Distribution, Poisson};
use wavesc_core::bench::{make_missing, MissingKind};
use wavesc_core::rng::{derive_seed, purpose, substream};
use wavesc_core::selfcon::{run_misc, NoiseFamily, ObservationSet, SelfConConfig};
use wavesc_core::shrinkage::{PoissonShrinker, Shrinker};
use wavesc_core::{Grid, Transform};

use super::{recorded_argv, wavelet_json};
use crate::args::PoissonDemo;
use crate::config::{check_fraction, parse_threshold, parse_wavelet};
use crate::error::{CliError, CliResult};
use crate::io::{csv_bytes, num, parse_counts, read_bytes};
use crate::output::Staged;

/// Smooth positive intensity with two peaks of different width.
pub fn demo_intensity(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let t = i as f64 / n as f64;
            let bump = |m: f64, s: f64| (-0.5 * ((t - m) / s).powi(2)).exp();
            4.0 + 30.0 * bump(0.3, 0.04)
                + 12.0 * bump(0.65, 0.08)
                + 6.0 * (2.0 * std::f64::consts::PI * t).sin().abs()
        })
        .collect()
}

pub fn run(a: &PoissonDemo, raw: &[String]) -> CliResult<()> {
    let mut staged = Staged::new(&a.output.out, a.output.force)?;
    let (counts, intensity) = match &a.counts {
        Some(path) => {
            let bytes = read_bytes(path)?;
            staged.input(path, &bytes);
            (parse_counts(&bytes, &path.display().to_string())?, None)
        }
        None => {
            let f = demo_intensity(a.n);
            let mut rng = substream(a.seed, purpose::NOISE, 0, 0);
            let counts = f
                .iter()
                .map(|&l| Poisson::new(l).map(|d| d.sample(&mut rng)))
                .collect::<Result<Vec<f64>, _>>()
                .map_err(|e| CliError::Numerical(format!("poisson draw: {e}")))?;
            (counts, Some(f))
        }
    };
    let n = counts.len();
    let grid = Grid::Line(n);
    let wavelet = parse_wavelet(&a.wavelet.wavelet, a.wavelet.primary_level)?;
    let transform = Transform::new(wavelet, grid)?;
    let policy = parse_threshold(&a.threshold.threshold, a.threshold.operator)?;
    let shrinker = PoissonShrinker { policy };
    let mask = make_missing(
        grid,
        check_fraction(a.missing)?,
        MissingKind::Random,
        derive_seed(a.seed, &[purpose::MASK, 0]),
    )?;

    let complete = shrinker.shrink(&transform, &counts)?;
    let obs = ObservationSet::from_mask(grid, &mask, &counts)?;
    let config = SelfConConfig {
        wavelet,
        policy,
        epsilon: a.epsilon,
        max_iterations: a.max_iter,
        imputations: a.m,
        seed: derive_seed(a.seed, &[purpose::ALGORITHM, 0]),
        ..SelfConConfig::default()
    };
    let report = run_misc(&obs, &config, &shrinker, NoiseFamily::Poisson)?;

    let nf = n as f64;
    staged.add(
        "curves.csv",
        csv_bytes(
            &[
                "index",
                "x",
                "count",
                "observed",
                "complete_fit",
                "missing_fit",
                "intensity",
            ],
            (0..n).map(|i| {
                vec![
                    i.to_string(),
                    num(i as f64 / nf),
                    num(counts[i]),
                    u8::from(mask.is_observed(i)).to_string(),
                    num(complete[i]),
                    num(report.f_hat[i]),
                    intensity.as_ref().map(|f| num(f[i])).unwrap_or_default(),
                ]
            }),
        ),
    );
    staged.add_json(
        "report.json",
        &serde_json::json!({
            "iterations": report.iterations,
            "converged": report.converged,
            "clamped_intensities": report.clamped_intensities,
            "missing": mask.missing_indices(),
        }),
    );
    let config_json = serde_json::json!({
        "n": n,
        "missing": a.missing,
        "M": a.m,
        "wavelet": wavelet_json(&wavelet),
        "engine": config,
        "synthetic": intensity.is_some(),
    });
    staged.commit(
        "poisson-demo",
        recorded_argv(raw, Some(a.seed)),
        config_json,
        Some(a.seed),
    )?;
    Ok(())
}
