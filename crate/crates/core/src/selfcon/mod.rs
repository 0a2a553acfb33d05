// SPDX-License-Identifier: MIT OR Apache-2.0

//! Self-consistency engines for incomplete data.
//!
//! All three engines alternate an imputation-like E-step with a
//! complete-data shrinkage step until the noise scale settles:
//!
//! - **Sim** imputes missing responses by the current estimate and inflates
//!   the MAD noise scale by `C_m σ̂_prev²` before thresholding.
//! - **Ref** keeps the Sim noise update but replaces thresholding with the
//!   conditional mean of the thresholded coefficient given the completed
//!   data ([`conditional_mean_hard`] / [`conditional_mean_soft`]).
//!   [`EtaMode::Average`] gives the RefA variant.
//! - **MISC** averages a complete-data [`Shrinker`] over `M` stochastic
//!   completions and re-estimates σ from observed residuals.

mod conditional;
mod hybrid;
mod init;
mod oracle;

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::imputation::{draw_missing, NoiseKind, NoiseModel};
use crate::shrinkage::{
    inflate_variance, mad_sigma, residual_sigma, NoiseScale, Shrinker, ThresholdOperator,
    ThresholdPolicy,
};
use crate::transform::{
    irregularity_map, Grid, IrregularityMap, ResponseIndicator, Transform, WaveletSpec,
};
use crate::{Error, Result};

pub use conditional::{alpha_beta, conditional_mean_hard, conditional_mean_soft};
pub use hybrid::interpolate_hybrid;
pub use init::{initial_estimate, Init};
pub use oracle::{ls_fixed_point_oracle, ls_slope};

/// Responses observed on a subset of a regular dyadic grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservationSet {
    grid: Grid,
    mask: ResponseIndicator,
    observed: Vec<usize>,
    missing: Vec<usize>,
    y_obs: Vec<f64>,
}

impl ObservationSet {
    /// `observed_indices` must be strictly increasing and within the grid.
    pub fn new(grid: Grid, observed_indices: Vec<usize>, y_obs: Vec<f64>) -> Result<Self> {
        if observed_indices.len() != y_obs.len() {
            return Err(Error::LengthMismatch {
                expected: observed_indices.len(),
                actual: y_obs.len(),
            });
        }
        if observed_indices.len() < 2 {
            return Err(Error::TooFewObserved {
                required: 2,
                actual: observed_indices.len(),
            });
        }
        let len = grid.len();
        for (k, &i) in observed_indices.iter().enumerate() {
            if i >= len || (k > 0 && observed_indices[k - 1] >= i) {
                return Err(Error::BadIndex(i));
            }
        }
        let mask = ResponseIndicator::from_observed(len, &observed_indices)?;
        Ok(Self {
            grid,
            missing: mask.missing_indices(),
            mask,
            observed: observed_indices,
            y_obs,
        })
    }

    /// Takes the observed entries of a full-grid response vector.
    pub fn from_mask(grid: Grid, mask: &ResponseIndicator, y_full: &[f64]) -> Result<Self> {
        if mask.len() != grid.len() || y_full.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                actual: if mask.len() != grid.len() {
                    mask.len()
                } else {
                    y_full.len()
                },
            });
        }
        let idx = mask.observed_indices();
        let y = idx.iter().map(|&i| y_full[i]).collect();
        Self::new(grid, idx, y)
    }

    pub fn complete(grid: Grid, y_full: &[f64]) -> Result<Self> {
        Self::from_mask(grid, &ResponseIndicator::full(grid.len()), y_full)
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn mask(&self) -> &ResponseIndicator {
        &self.mask
    }

    pub fn observed_indices(&self) -> &[usize] {
        &self.observed
    }

    pub fn missing_indices(&self) -> &[usize] {
        &self.missing
    }

    pub fn y_obs(&self) -> &[f64] {
        &self.y_obs
    }

    pub fn n_observed(&self) -> usize {
        self.observed.len()
    }

    pub fn is_fully_observed(&self) -> bool {
        self.missing.is_empty()
    }

    /// `C_m = 1 − n/N`.
    pub fn missing_fraction(&self) -> f64 {
        self.mask.missing_fraction()
    }

    /// Design point of flat index `i` on a line grid, `i/N`.
    pub fn x(&self, i: usize) -> f64 {
        i as f64 / self.grid.side() as f64
    }

    /// Observed responses overlaid on a full-grid fill.
    pub fn complete_with(&self, fill: &[f64]) -> Vec<f64> {
        let mut y = fill.to_vec();
        for (&i, &v) in self.observed.iter().zip(&self.y_obs) {
            y[i] = v;
        }
        y
    }

    /// Observed responses plus `values` at the missing indices (in order).
    pub fn complete_with_missing(&self, values: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.len()];
        for (&i, &v) in self.observed.iter().zip(&self.y_obs) {
            y[i] = v;
        }
        for (&i, &v) in self.missing.iter().zip(values) {
            y[i] = v;
        }
        y
    }

    fn at_observed(&self, f: &[f64]) -> Vec<f64> {
        self.observed.iter().map(|&i| f[i]).collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum EtaMode {
    /// Per-coefficient `η²` from the response mask.
    #[default]
    Exact,
    /// Every `η²` replaced by the missing fraction.
    Average,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Interpolation {
    #[default]
    None,
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    Sim,
    Ref,
    Misc,
}

/// Noise family assumed by MISC when drawing the missing responses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum NoiseFamily {
    #[default]
    Gaussian,
    Poisson,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfConConfig {
    pub wavelet: WaveletSpec,
    pub policy: ThresholdPolicy,
    /// Relative change of σ̂ (or of `f̂` in L₂ for Poisson MISC) below which
    /// the iteration stops.
    pub epsilon: f64,
    pub max_iterations: usize,
    /// MISC imputation count `M`.
    pub imputations: usize,
    pub eta_mode: EtaMode,
    pub interpolation: Interpolation,
    pub init: Init,
    pub seed: u64,
    /// Apply variance inflation in Sim/Ref. Disabling it reproduces the
    /// naive update that uses the unadjusted MAD scale.
    pub inflate: bool,
}

impl Default for SelfConConfig {
    fn default() -> Self {
        Self {
            wavelet: WaveletSpec::d5(),
            policy: ThresholdPolicy::universal_hard(),
            epsilon: 1e-4,
            max_iterations: 100,
            imputations: 100,
            eta_mode: EtaMode::Exact,
            interpolation: Interpolation::None,
            init: Init::default(),
            seed: 0,
            inflate: true,
        }
    }
}

impl SelfConConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::invalid("epsilon must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations must be at least 1"));
        }
        if self.imputations == 0 {
            return Err(Error::invalid("imputation count M must be at least 1"));
        }
        self.policy.validate()?;
        self.init.validate()
    }
}

/// Result of one self-consistent fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub algorithm: Algorithm,
    pub f_hat: Vec<f64>,
    pub sigma_hat: f64,
    /// σ̂ after each iteration.
    pub sigma_trajectory: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub eta: Option<IrregularityMap>,
    /// Mean squared residual over observed points after each iteration.
    pub mrss_obs: Vec<f64>,
    /// Mean squared error over observed points after each iteration, when
    /// the true signal was supplied.
    pub mse_obs: Option<Vec<f64>>,
    /// Set when some σ estimate was zero and had to be floored.
    pub degenerate_sigma: bool,
    /// Negative Poisson intensities clamped to zero while imputing.
    pub clamped_intensities: usize,
}

/// Engine selector for [`estimate`].
#[derive(Clone, Copy)]
pub enum Method<'a> {
    Sim,
    Ref,
    Misc {
        shrinker: &'a dyn Shrinker,
        noise: NoiseFamily,
    },
}

pub fn run_sim(obs: &ObservationSet, config: &SelfConConfig) -> Result<EstimateReport> {
    estimate(obs, config, Method::Sim, None)
}

pub fn run_ref(obs: &ObservationSet, config: &SelfConConfig) -> Result<EstimateReport> {
    estimate(obs, config, Method::Ref, None)
}

pub fn run_misc(
    obs: &ObservationSet,
    config: &SelfConConfig,
    shrinker: &dyn Shrinker,
    noise: NoiseFamily,
) -> Result<EstimateReport> {
    estimate(obs, config, Method::Misc { shrinker, noise }, None)
}

/// Runs an engine; `truth`, when given, adds the per-iteration observed MSE
/// to the report.
pub fn estimate(
    obs: &ObservationSet,
    config: &SelfConConfig,
    method: Method<'_>,
    truth: Option<&[f64]>,
) -> Result<EstimateReport> {
    config.validate()?;
    if let Some(t) = truth {
        if t.len() != obs.len() {
            return Err(Error::LengthMismatch {
                expected: obs.len(),
                actual: t.len(),
            });
        }
    }
    if config.interpolation == Interpolation::Linear && obs.grid().is_2d() {
        return Err(Error::Unsupported(
            "linear interpolation hybrid is defined for 1D grids only".into(),
        ));
    }
    let transform = Transform::new(config.wavelet, obs.grid())?;
    let trace = Trace::new(obs, truth);
    match method {
        Method::Sim => deterministic(obs, config, &transform, false, trace),
        Method::Ref => deterministic(obs, config, &transform, true, trace),
        Method::Misc { shrinker, noise } => misc(obs, config, &transform, shrinker, noise, trace),
    }
}

struct Trace<'a> {
    obs: &'a ObservationSet,
    truth_obs: Option<Vec<f64>>,
    sigma: Vec<f64>,
    mrss: Vec<f64>,
    mse: Vec<f64>,
    degenerate: bool,
}

impl<'a> Trace<'a> {
    fn new(obs: &'a ObservationSet, truth: Option<&[f64]>) -> Self {
        Self {
            obs,
            truth_obs: truth.map(|t| obs.at_observed(t)),
            sigma: Vec::new(),
            mrss: Vec::new(),
            mse: Vec::new(),
            degenerate: false,
        }
    }

    fn record(&mut self, sigma: f64, f: &[f64]) {
        self.sigma.push(sigma);
        let n = self.obs.n_observed() as f64;
        let fit = self.obs.at_observed(f);
        let rss: f64 = self
            .obs
            .y_obs()
            .iter()
            .zip(&fit)
            .map(|(y, g)| (y - g) * (y - g))
            .sum();
        self.mrss.push(rss / n);
        if let Some(t) = &self.truth_obs {
            let se: f64 = t.iter().zip(&fit).map(|(a, b)| (a - b) * (a - b)).sum();
            self.mse.push(se / n);
        }
    }

    fn floor(&mut self, scale: NoiseScale) -> f64 {
        self.degenerate |= scale.degenerate;
        scale.floored()
    }

    fn finish(
        self,
        algorithm: Algorithm,
        f_hat: Vec<f64>,
        converged: bool,
        eta: Option<IrregularityMap>,
        clamped_intensities: usize,
    ) -> EstimateReport {
        EstimateReport {
            algorithm,
            sigma_hat: self.sigma.last().copied().unwrap_or(0.0),
            iterations: self.sigma.len(),
            mse_obs: self.truth_obs.as_ref().map(|_| self.mse),
            sigma_trajectory: self.sigma,
            mrss_obs: self.mrss,
            f_hat,
            converged,
            eta,
            degenerate_sigma: self.degenerate,
            clamped_intensities,
        }
    }
}

fn relative_change(new: f64, old: f64) -> f64 {
    (new - old).abs() / new
}

/// Sim (`refined = false`) and Ref (`refined = true`).
fn deterministic(
    obs: &ObservationSet,
    config: &SelfConConfig,
    transform: &Transform,
    refined: bool,
    mut trace: Trace<'_>,
) -> Result<EstimateReport> {
    let n = transform.len();
    let cm = obs.missing_fraction();
    let eta = if refined {
        Some(match config.eta_mode {
            EtaMode::Exact => irregularity_map(obs.mask(), transform)?,
            EtaMode::Average => IrregularityMap::average(cm, n),
        })
    } else {
        None
    };
    let (mut f, mut sigma_prev) = if obs.is_fully_observed() {
        (obs.complete_with(&vec![0.0; n]), 0.0)
    } else {
        let (f0, s0) = initial_estimate(obs, config.init, transform)?;
        let s0 = trace.floor(s0);
        (f0, s0)
    };
    let mut converged = false;
    for _ in 0..config.max_iterations {
        let y = obs.complete_with(&f);
        let w = transform.forward(&y)?;
        let tilde = mad_sigma(&w)?;
        let scale = if config.inflate {
            inflate_variance(tilde.sigma, sigma_prev, cm)
        } else {
            tilde
        };
        let sigma = trace.floor(scale);
        let c = config.policy.threshold(sigma, n)?;
        let w_hat = match &eta {
            Some(eta) => {
                let update = match config.policy.operator {
                    ThresholdOperator::Hard => conditional_mean_hard,
                    ThresholdOperator::Soft => conditional_mean_soft,
                };
                w.map_details(|l, wl| update(wl, eta.eta_sq[l], sigma, c))
            }
            None => config.policy.apply(&w, c),
        };
        f = transform.inverse(&w_hat)?;
        if config.interpolation == Interpolation::Linear {
            hybrid::interpolate_in_place(&mut f, obs)?;
        }
        trace.record(sigma, &f);
        if obs.is_fully_observed() || relative_change(sigma, sigma_prev) < config.epsilon {
            converged = true;
            break;
        }
        sigma_prev = sigma;
    }
    let algorithm = if refined {
        Algorithm::Ref
    } else {
        Algorithm::Sim
    };
    Ok(trace.finish(algorithm, f, converged, eta, 0))
}

fn l2_relative_change(new: &[f64], old: &[f64]) -> f64 {
    let diff: f64 = new.iter().zip(old).map(|(a, b)| (a - b) * (a - b)).sum();
    let norm: f64 = new.iter().map(|a| a * a).sum();
    if norm > 0.0 {
        libm::sqrt(diff / norm)
    } else {
        libm::sqrt(diff)
    }
}

/// Multiple-imputation engine. Replicate `m` always reads the same random
/// substream, so successive iterations differ only through `f̂` and σ̂.
fn misc(
    obs: &ObservationSet,
    config: &SelfConConfig,
    transform: &Transform,
    shrinker: &dyn Shrinker,
    noise: NoiseFamily,
    mut trace: Trace<'_>,
) -> Result<EstimateReport> {
    let n = transform.len();
    let tagged = |m: usize| {
        move |e: Error| Error::Replicate {
            replicate: m,
            source: alloc::boxed::Box::new(e),
        }
    };
    let sigma_of = |f: &[f64]| residual_sigma(obs.y_obs(), &obs.at_observed(f));
    if obs.is_fully_observed() {
        let f = shrinker
            .shrink(transform, &obs.complete_with(&vec![0.0; n]))
            .map_err(tagged(0))?;
        let s = sigma_of(&f)?;
        let s = trace.floor(s);
        trace.record(s, &f);
        return Ok(trace.finish(Algorithm::Misc, f, true, None, 0));
    }

    let (mut f, s0) = initial_estimate(obs, config.init, transform)?;
    let mut sigma_prev = trace.floor(s0);
    let mut clamped = 0;
    let mut converged = false;
    let missing = obs.missing_indices();
    for _ in 0..config.max_iterations {
        let kind = match noise {
            NoiseFamily::Gaussian => NoiseKind::GaussianIid { sigma: sigma_prev },
            NoiseFamily::Poisson => NoiseKind::Poisson,
        };
        let model = NoiseModel {
            kind,
            seed: config.seed,
        };
        let mut acc = vec![0.0; n];
        for m in 0..config.imputations {
            let fill = draw_missing(&f, missing, &model, 0, m as u64).map_err(tagged(m))?;
            clamped += fill.clamped;
            let fm = shrinker
                .shrink(transform, &obs.complete_with_missing(&fill.values))
                .map_err(tagged(m))?;
            for (a, v) in acc.iter_mut().zip(&fm) {
                *a += v;
            }
        }
        let inv = 1.0 / config.imputations as f64;
        let mut next: Vec<f64> = acc.into_iter().map(|a| a * inv).collect();
        if config.interpolation == Interpolation::Linear {
            hybrid::interpolate_in_place(&mut next, obs)?;
        }
        let s = sigma_of(&next)?;
        let sigma = trace.floor(s);
        trace.record(sigma, &next);
        let change = match noise {
            NoiseFamily::Gaussian => relative_change(sigma, sigma_prev),
            NoiseFamily::Poisson => l2_relative_change(&next, &f),
        };
        f = next;
        sigma_prev = sigma;
        if change < config.epsilon {
            converged = true;
            break;
        }
    }
    Ok(trace.finish(Algorithm::Misc, f, converged, None, clamped))
}
