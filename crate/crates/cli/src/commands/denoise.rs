// SPDX-License-Identifier: MIT OR Apache-2.0

use serde::Serialize;
use wavesc_core::selfcon::{
    estimate, EstimateReport, Method, NoiseFamily, ObservationSet, SelfConConfig,
};
use wavesc_core::shrinkage::GaussianShrinker;
use wavesc_core::{Grid, ResponseIndicator, Transform};

use super::{eta_csv, recorded_argv, wavelet_json};
use crate::args::{Algo, Denoise1d, Denoise2d, Estimator};
use crate::config::selfcon_config;
use crate::error::{CliError, CliResult};
use crate::io::{csv_bytes, num, parse_pgm, parse_series, pgm_bytes, read_bytes};
use crate::output::Staged;

#[derive(Serialize)]
struct Report<'a> {
    algorithm: &'static str,
    n: usize,
    n_observed: usize,
    missing_fraction: f64,
    iterations: usize,
    converged: bool,
    sigma_hat: f64,
    sigma_trajectory: &'a [f64],
    mrss_obs: &'a [f64],
    degenerate_sigma: bool,
    clamped_intensities: usize,
    config: &'a SelfConConfig,
    f_hat: &'a [f64],
    #[serde(skip_serializing_if = "Option::is_none")]
    eta_sq: Option<&'a [f64]>,
}

fn algo_name(a: Algo) -> &'static str {
    match a {
        Algo::Sim => "Sim",
        Algo::Ref => "Ref",
        Algo::Refa => "RefA",
        Algo::Misc => "MISC",
    }
}

fn fit(obs: &ObservationSet, est: &Estimator, config: &SelfConConfig) -> CliResult<EstimateReport> {
    let shrinker = GaussianShrinker::new(config.policy);
    let method = match est.algo {
        Algo::Sim => Method::Sim,
        Algo::Ref | Algo::Refa => Method::Ref,
        Algo::Misc => Method::Misc {
            shrinker: &shrinker,
            noise: NoiseFamily::Gaussian,
        },
    };
    let report = estimate(obs, config, method, None)?;
    if report.f_hat.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Numerical(
            "estimate contains non-finite values".into(),
        ));
    }
    Ok(report)
}

fn report_json<'a>(
    est: &Estimator,
    obs: &ObservationSet,
    config: &'a SelfConConfig,
    r: &'a EstimateReport,
) -> Report<'a> {
    Report {
        algorithm: algo_name(est.algo),
        n: obs.len(),
        n_observed: obs.n_observed(),
        missing_fraction: obs.missing_fraction(),
        iterations: r.iterations,
        converged: r.converged,
        sigma_hat: r.sigma_hat,
        sigma_trajectory: &r.sigma_trajectory,
        mrss_obs: &r.mrss_obs,
        degenerate_sigma: r.degenerate_sigma,
        clamped_intensities: r.clamped_intensities,
        config,
        f_hat: &r.f_hat,
        eta_sq: r.eta.as_ref().map(|e| e.eta_sq.as_slice()),
    }
}

fn config_json(est: &Estimator, config: &SelfConConfig) -> serde_json::Value {
    serde_json::json!({
        "algorithm": algo_name(est.algo),
        "wavelet": wavelet_json(&config.wavelet),
        "engine": config,
    })
}

pub fn denoise1d(a: &Denoise1d, raw: &[String]) -> CliResult<()> {
    let mut staged = Staged::new(&a.output.out, a.output.force)?;
    let bytes = read_bytes(&a.input)?;
    staged.input(&a.input, &bytes);
    let series = parse_series(&bytes, &a.input.display().to_string())?;
    let config = selfcon_config(&a.estimator)?;
    let grid = Grid::Line(series.y.len());
    let transform = Transform::new(config.wavelet, grid)?;
    let mask = ResponseIndicator::new(series.observed.clone());
    let obs = ObservationSet::from_mask(grid, &mask, &series.y)?;
    let report = fit(&obs, &a.estimator, &config)?;

    let n = report.f_hat.len();
    staged.add(
        "fhat.csv",
        csv_bytes(
            &["index", "x", "f_hat"],
            report
                .f_hat
                .iter()
                .enumerate()
                .map(|(i, &f)| vec![i.to_string(), num(i as f64 / n as f64), num(f)]),
        ),
    );
    staged.add_json(
        "report.json",
        &report_json(&a.estimator, &obs, &config, &report),
    );
    if a.eta {
        staged.add("eta.csv", eta_csv(&mask, &transform)?);
    }
    staged.commit(
        "denoise1d",
        recorded_argv(raw, Some(config.seed)),
        config_json(&a.estimator, &config),
        Some(config.seed),
    )?;
    if !report.converged {
        eprintln!(
            "warning: no convergence after {} iterations (converged=false in report.json)",
            report.iterations
        );
    }
    Ok(())
}

pub fn denoise2d(a: &Denoise2d, raw: &[String]) -> CliResult<()> {
    let mut staged = Staged::new(&a.output.out, a.output.force)?;
    let bytes = read_bytes(&a.image)?;
    staged.input(&a.image, &bytes);
    let image = parse_pgm(&bytes, &a.image.display().to_string())?;
    if image.width != image.height {
        return Err(CliError::input(format!(
            "image is {}x{}; a square image is required",
            image.width, image.height
        )));
    }
    let side = image.width;
    let observed = match &a.mask {
        None => vec![true; side * side],
        Some(path) => {
            let mb = read_bytes(path)?;
            staged.input(path, &mb);
            let mask = parse_pgm(&mb, &path.display().to_string())?;
            if (mask.width, mask.height) != (image.width, image.height) {
                return Err(CliError::input(format!(
                    "mask is {}x{} but the image is {}x{}",
                    mask.width, mask.height, image.width, image.height
                )));
            }
            mask.pixels.iter().map(|&v| v != 0.0).collect()
        }
    };
    let config = selfcon_config(&a.estimator)?;
    let grid = Grid::Square(side);
    Transform::new(config.wavelet, grid)?;
    let mask = ResponseIndicator::new(observed);
    let obs = ObservationSet::from_mask(grid, &mask, &image.pixels)?;
    let report = fit(&obs, &a.estimator, &config)?;

    let (lo, hi) = obs
        .y_obs()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| {
            (l.min(v), h.max(v))
        });
    let clamped: Vec<f64> = report.f_hat.iter().map(|v| v.clamp(lo, hi)).collect();
    staged.add("fhat.pgm", pgm_bytes(side, side, image.maxval, &clamped));
    staged.add_json(
        "report.json",
        &report_json(&a.estimator, &obs, &config, &report),
    );
    staged.commit(
        "denoise2d",
        recorded_argv(raw, Some(config.seed)),
        config_json(&a.estimator, &config),
        Some(config.seed),
    )?;
    if !report.converged {
        eprintln!(
            "warning: no convergence after {} iterations (converged=false in report.json)",
            report.iterations
        );
    }
    Ok(())
}
