// SPDX-License-Identifier: MIT OR Apache-2.0

//! Complete-data shrinkage: thresholding operators, threshold rules, noise
//! scale estimates and the pluggable [`Shrinker`] interface.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::stats::median;
use crate::transform::{CoefficientArray, Transform};
use crate::{Error, Result};

/// `Φ⁻¹(0.75)`, the MAD normalizing constant for Gaussian noise.
pub const MAD_CONSTANT: f64 = 0.6745;

/// Lower bound applied to noise scales inside iterative loops.
pub const SIGMA_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ThresholdSelector {
    /// `σ √(2 ln N)`
    Universal,
    /// `σ √(2 ln N − ln(1 + 256 ln N))`
    Adjusted,
    /// A fixed threshold, independent of σ.
    Fixed(f64),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThresholdOperator {
    #[default]
    Hard,
    Soft,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPolicy {
    pub selector: ThresholdSelector,
    pub operator: ThresholdOperator,
}

impl ThresholdPolicy {
    pub const fn new(selector: ThresholdSelector, operator: ThresholdOperator) -> Self {
        Self { selector, operator }
    }

    pub const fn universal_hard() -> Self {
        Self::new(ThresholdSelector::Universal, ThresholdOperator::Hard)
    }

    pub const fn adjusted_hard() -> Self {
        Self::new(ThresholdSelector::Adjusted, ThresholdOperator::Hard)
    }

    pub fn validate(&self) -> Result<()> {
        match self.selector {
            ThresholdSelector::Fixed(c) if !(c >= 0.0 && c.is_finite()) => Err(Error::invalid(
                "fixed threshold must be finite and non-negative",
            )),
            _ => Ok(()),
        }
    }

    /// `g(σ)` for a transform with `n` coefficients.
    pub fn threshold(&self, sigma: f64, n: usize) -> Result<f64> {
        match self.selector {
            ThresholdSelector::Universal => Ok(universal_threshold(sigma, n)),
            ThresholdSelector::Adjusted => adjusted_threshold(sigma, n),
            ThresholdSelector::Fixed(c) => {
                self.validate()?;
                Ok(c)
            }
        }
    }

    pub fn apply(&self, coeffs: &CoefficientArray, c: f64) -> CoefficientArray {
        match self.operator {
            ThresholdOperator::Hard => hard_threshold(coeffs, c, true),
            ThresholdOperator::Soft => soft_threshold(coeffs, c, true),
        }
    }
}

impl Default for ThresholdPolicy {
    fn default() -> Self {
        Self::universal_hard()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SigmaSource {
    Mad,
    Inflated,
    ResidualMle,
    Known,
}

/// A noise standard deviation with its provenance.
///
/// `degenerate` marks a zero estimate; callers floor it with
/// [`NoiseScale::floored`] before dividing by it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseScale {
    pub sigma: f64,
    pub source: SigmaSource,
    pub degenerate: bool,
}

impl NoiseScale {
    pub fn new(sigma: f64, source: SigmaSource) -> Self {
        Self {
            sigma,
            source,
            degenerate: !(sigma > 0.0),
        }
    }

    pub fn floored(&self) -> f64 {
        if self.sigma > SIGMA_FLOOR {
            self.sigma
        } else {
            SIGMA_FLOOR
        }
    }
}

#[inline]
pub fn hard(w: f64, c: f64) -> f64 {
    if w.abs() >= c {
        w
    } else {
        0.0
    }
}

#[inline]
pub fn soft(w: f64, c: f64) -> f64 {
    let m = w.abs() - c;
    if m > 0.0 {
        m.copysign(w)
    } else {
        0.0
    }
}

fn threshold_with(
    coeffs: &CoefficientArray,
    protect_coarse: bool,
    op: impl Fn(f64) -> f64,
) -> CoefficientArray {
    if protect_coarse {
        coeffs.map_details(|_, w| op(w))
    } else {
        CoefficientArray {
            values: coeffs.values.iter().map(|&w| op(w)).collect(),
            layout: coeffs.layout,
        }
    }
}

pub fn hard_threshold(coeffs: &CoefficientArray, c: f64, protect_coarse: bool) -> CoefficientArray {
    threshold_with(coeffs, protect_coarse, |w| hard(w, c))
}

pub fn soft_threshold(coeffs: &CoefficientArray, c: f64, protect_coarse: bool) -> CoefficientArray {
    threshold_with(coeffs, protect_coarse, |w| soft(w, c))
}

/// `median(|finest details|) / 0.6745`.
pub fn mad_sigma(coeffs: &CoefficientArray) -> Result<NoiseScale> {
    let abs: Vec<f64> = coeffs.finest_details().map(f64::abs).collect();
    let med = median(&abs).ok_or(Error::EmptyFinestLevel)?;
    Ok(NoiseScale::new(med / MAD_CONSTANT, SigmaSource::Mad))
}

pub fn universal_threshold(sigma: f64, n: usize) -> f64 {
    sigma * libm::sqrt(2.0 * libm::log(n as f64))
}

pub fn adjusted_threshold(sigma: f64, n: usize) -> Result<f64> {
    let ln_n = libm::log(n as f64);
    let radicand = 2.0 * ln_n - libm::log(1.0 + 256.0 * ln_n);
    if !(radicand > 0.0) {
        return Err(Error::NonPositiveRadicand(n));
    }
    Ok(sigma * libm::sqrt(radicand))
}

/// Variance inflation: `σ̂ = √(σ̃² + C_m σ̂_prev²)`.
pub fn inflate_variance(
    sigma_unadjusted: f64,
    sigma_prev: f64,
    missing_fraction: f64,
) -> NoiseScale {
    let sigma = if missing_fraction == 0.0 || sigma_prev == 0.0 {
        sigma_unadjusted
    } else {
        libm::sqrt(sigma_unadjusted * sigma_unadjusted + missing_fraction * sigma_prev * sigma_prev)
    };
    NoiseScale::new(sigma, SigmaSource::Inflated)
}

/// Gaussian MLE of σ from residuals at observed points.
pub fn residual_sigma(y_obs: &[f64], fitted_obs: &[f64]) -> Result<NoiseScale> {
    if y_obs.len() != fitted_obs.len() {
        return Err(Error::LengthMismatch {
            expected: y_obs.len(),
            actual: fitted_obs.len(),
        });
    }
    if y_obs.len() < 2 {
        return Err(Error::TooFewObserved {
            required: 2,
            actual: y_obs.len(),
        });
    }
    let rss: f64 = y_obs
        .iter()
        .zip(fitted_obs)
        .map(|(y, f)| (y - f) * (y - f))
        .sum();
    Ok(NoiseScale::new(
        libm::sqrt(rss / y_obs.len() as f64),
        SigmaSource::ResidualMle,
    ))
}

/// The standard complete-data pipeline: DWT, MAD σ (floored), threshold at
/// `g(σ)` per `policy`, inverse DWT.
pub fn shrink_complete(
    transform: &Transform,
    y: &[f64],
    policy: &ThresholdPolicy,
) -> Result<(Vec<f64>, NoiseScale)> {
    let w = transform.forward(y)?;
    let scale = mad_sigma(&w)?;
    let c = policy.threshold(scale.floored(), transform.len())?;
    let f = transform.inverse(&policy.apply(&w, c))?;
    Ok((f, scale))
}

/// A complete-data wavelet regression procedure.
pub trait Shrinker {
    /// Estimates the signal on the full grid from complete data `y`.
    fn shrink(&self, transform: &Transform, y: &[f64]) -> Result<Vec<f64>>;
}

/// Gaussian-noise thresholding; σ from MAD unless supplied.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GaussianShrinker {
    pub policy: ThresholdPolicy,
    pub sigma: Option<f64>,
}

impl GaussianShrinker {
    pub fn new(policy: ThresholdPolicy) -> Self {
        Self {
            policy,
            sigma: None,
        }
    }
}

impl Shrinker for GaussianShrinker {
    fn shrink(&self, transform: &Transform, y: &[f64]) -> Result<Vec<f64>> {
        match self.sigma {
            None => shrink_complete(transform, y, &self.policy).map(|(f, _)| f),
            Some(sigma) => {
                if !(sigma > 0.0) {
                    return Err(Error::invalid("known sigma must be positive"));
                }
                let w = transform.forward(y)?;
                let c = self.policy.threshold(sigma, transform.len())?;
                transform.inverse(&self.policy.apply(&w, c))
            }
        }
    }
}

/// Intensities at or below this are reported as zero.
pub const POISSON_ZERO: f64 = 1e-9;

/// Poisson-count stand-in: Anscombe transform `2√(y + 3/8)`, Gaussian
/// thresholding with unit noise scale, algebraic inverse, clamp at zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PoissonShrinker {
    pub policy: ThresholdPolicy,
}

impl Shrinker for PoissonShrinker {
    fn shrink(&self, transform: &Transform, y: &[f64]) -> Result<Vec<f64>> {
        if let Some(&bad) = y.iter().find(|&&v| !(v >= 0.0)) {
            return Err(Error::invalid(alloc::format!(
                "negative or NaN count {bad}"
            )));
        }
        let z: Vec<f64> = y.iter().map(|&v| 2.0 * libm::sqrt(v + 0.375)).collect();
        let gauss = GaussianShrinker {
            policy: self.policy,
            sigma: Some(1.0),
        };
        let zhat = gauss.shrink(transform, &z)?;
        Ok(zhat
            .into_iter()
            .map(|v| {
                let lambda = 0.25 * v * v - 0.375;
                // transform round-off on all-zero counts
                if lambda > POISSON_ZERO {
                    lambda
                } else {
                    0.0
                }
            })
            .collect())
    }
}
