// SPDX-License-Identifier: MIT OR Apache-2.0

//! Conditional samplers for the missing responses.
//!
//! Draws for `(seed, iteration, replicate)` come from their own ChaCha
//! substream and are consumed in ascending missing-index order, so any
//! replicate can be generated independently of the others.

use alloc::vec::Vec;

use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::rng::{purpose, substream};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum NoiseKind {
    /// `y_i ~ N(f(x_i), σ²)` independently.
    GaussianIid { sigma: f64 },
    /// `y_i ~ Poisson(max(f(x_i), 0))` independently.
    Poisson,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub seed: u64,
}

/// Fill values for the missing indices of a mask, in ascending index order.
#[derive(Clone, Debug, PartialEq)]
pub struct Imputation {
    pub values: Vec<f64>,
    /// Number of negative intensities clamped to zero (Poisson only).
    pub clamped: usize,
}

/// Draws one replicate of the missing responses given the current estimate.
///
/// `missing` lists the indices to fill; `f_hat` is the full-grid estimate.
pub fn draw_missing(
    f_hat: &[f64],
    missing: &[usize],
    model: &NoiseModel,
    iteration: u64,
    replicate: u64,
) -> Result<Imputation> {
    let mut rng = substream(model.seed, purpose::IMPUTATION, iteration, replicate);
    let mut clamped = 0;
    let values = match model.kind {
        NoiseKind::GaussianIid { sigma } => {
            if !(sigma >= 0.0 && sigma.is_finite()) {
                return Err(Error::invalid(
                    "gaussian sigma must be finite and non-negative",
                ));
            }
            missing
                .iter()
                .map(|&i| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    f_hat[i] + sigma * z
                })
                .collect()
        }
        NoiseKind::Poisson => missing
            .iter()
            .map(|&i| {
                let lambda = f_hat[i];
                if lambda < 0.0 {
                    clamped += 1;
                }
                if lambda > 0.0 && lambda.is_finite() {
                    Poisson::new(lambda)
                        .map(|d| d.sample(&mut rng))
                        .unwrap_or(0.0)
                } else {
                    0.0
                }
            })
            .collect(),
    };
    Ok(Imputation { values, clamped })
}
