// SPDX-License-Identifier: MIT OR Apache-2.0

//! Error metrics over observed, missing and all grid points.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::transform::ResponseIndicator;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub mse_com: f64,
    pub mse_obs: f64,
    /// Absent when nothing is missing.
    pub mse_mis: Option<f64>,
    pub mrss_obs: f64,
}

/// Which column of a metric table to compare.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    MseCom,
    MseObs,
    MseMis,
    MrssObs,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Self::MseCom, Self::MseObs, Self::MseMis, Self::MrssObs];

    pub fn name(&self) -> &'static str {
        match self {
            Self::MseCom => "mse_com",
            Self::MseObs => "mse_obs",
            Self::MseMis => "mse_mis",
            Self::MrssObs => "mrss_obs",
        }
    }

    pub fn of(&self, m: &Metrics) -> Option<f64> {
        match self {
            Self::MseCom => Some(m.mse_com),
            Self::MseObs => Some(m.mse_obs),
            Self::MseMis => m.mse_mis,
            Self::MrssObs => Some(m.mrss_obs),
        }
    }
}

/// `y` is indexed on the full grid; only its observed entries are read.
pub fn metrics(
    f_true: &[f64],
    f_hat: &[f64],
    y: &[f64],
    mask: &ResponseIndicator,
) -> Result<Metrics> {
    let n = mask.len();
    for len in [f_true.len(), f_hat.len(), y.len()] {
        if len != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: len,
            });
        }
    }
    if mask.n_observed() == 0 {
        return Err(Error::TooFewObserved {
            required: 1,
            actual: 0,
        });
    }
    let (mut se_obs, mut se_mis, mut rss) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let e = f_hat[i] - f_true[i];
        if mask.is_observed(i) {
            se_obs += e * e;
            let r = y[i] - f_hat[i];
            rss += r * r;
        } else {
            se_mis += e * e;
        }
    }
    let n_obs = mask.n_observed() as f64;
    let n_mis = mask.n_missing();
    Ok(Metrics {
        mse_com: (se_obs + se_mis) / n as f64,
        mse_obs: se_obs / n_obs,
        mse_mis: (n_mis > 0).then(|| se_mis / n_mis as f64),
        mrss_obs: rss / n_obs,
    })
}

/// One algorithm on one replicate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub algorithm: super::AlgorithmId,
    pub replicate: usize,
    pub mse_com: f64,
    pub mse_obs: f64,
    pub mse_mis: Option<f64>,
    pub mrss_obs: f64,
    pub runtime_ms: Option<f64>,
    pub iterations: usize,
}

impl MetricRow {
    pub fn metric(&self, metric: Metric) -> Option<f64> {
        match metric {
            Metric::MseCom => Some(self.mse_com),
            Metric::MseObs => Some(self.mse_obs),
            Metric::MseMis => self.mse_mis,
            Metric::MrssObs => Some(self.mrss_obs),
        }
    }
}

/// `value / baseline`.
pub fn mse_ratio(value: f64, baseline: f64) -> Result<f64> {
    if baseline == 0.0 {
        return Err(Error::ZeroBaseline);
    }
    Ok(value / baseline)
}

/// Elementwise ratios of paired per-replicate values.
pub fn mse_ratios(values: &[f64], baseline: &[f64]) -> Result<Vec<f64>> {
    if values.len() != baseline.len() {
        return Err(Error::LengthMismatch {
            expected: baseline.len(),
            actual: values.len(),
        });
    }
    values
        .iter()
        .zip(baseline)
        .map(|(&v, &b)| mse_ratio(v, b))
        .collect()
}
