// SPDX-License-Identifier: MIT OR Apache-2.0

//! Paired simulation scenarios: every algorithm in a replicate sees the same
//! noisy data and the same mask.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::functions::{apply_snr, synthetic_image, TestFunction};
use super::metrics::{metrics, Metric, MetricRow};
use super::missing::{make_missing, MissingKind};
use super::wilcoxon::{rank_table, RankTable, DEFAULT_ALPHA, MIN_REPLICATES};
use crate::rng::{derive_seed, purpose, substream};
use crate::selfcon::{
    estimate, EtaMode, Init, Interpolation, Method, NoiseFamily, ObservationSet, SelfConConfig,
};
use crate::shrinkage::{shrink_complete, GaussianShrinker, ThresholdPolicy};
use crate::stats::median;
use crate::transform::{Grid, ResponseIndicator, Transform, WaveletSpec};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AlgorithmId {
    Sim,
    SimI,
    /// Sim without variance inflation.
    SimNaive,
    Ref,
    RefI,
    RefA,
    RefAI,
    Misc,
    MiscI,
    /// Complete-data thresholding of the full noisy sample.
    UniComp,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 10] = [
        Self::Sim,
        Self::SimI,
        Self::SimNaive,
        Self::Ref,
        Self::RefI,
        Self::RefA,
        Self::RefAI,
        Self::Misc,
        Self::MiscI,
        Self::UniComp,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Sim => "Sim",
            Self::SimI => "SimI",
            Self::SimNaive => "SimNaive",
            Self::Ref => "Ref",
            Self::RefI => "RefI",
            Self::RefA => "RefA",
            Self::RefAI => "RefAI",
            Self::Misc => "MISC",
            Self::MiscI => "MISCI",
            Self::UniComp => "UniComp",
        }
    }

    pub fn interpolates(&self) -> bool {
        matches!(self, Self::SimI | Self::RefI | Self::RefAI | Self::MiscI)
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(['-', '_'], "");
        Self::ALL
            .into_iter()
            .find(|a| a.name().to_ascii_lowercase() == key)
            .ok_or_else(|| Error::invalid(format!("unknown algorithm `{s}`")))
    }
}

/// True signal of a scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Signal {
    Function(TestFunction),
    /// Square image of side `n`.
    SyntheticImage,
    /// Values on a 1D grid; `n` must equal their count.
    UserSupplied(Vec<f64>),
}

impl Signal {
    pub fn name(&self) -> String {
        match self {
            Self::Function(f) => f.name().to_string(),
            Self::SyntheticImage => "synthetic-image".to_string(),
            Self::UserSupplied(_) => "user".to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub signal: Signal,
    /// Grid length (1D) or image side (2D).
    pub n: usize,
    pub snr: f64,
    pub missing_fraction: f64,
    pub missing_kind: MissingKind,
    pub algorithms: Vec<AlgorithmId>,
    pub replicates: usize,
    pub seed: u64,
    pub wavelet: WaveletSpec,
    /// Threshold rule shared by every algorithm, UniComp included.
    pub policy: ThresholdPolicy,
    /// MISC imputation count `M`.
    pub imputations: usize,
    pub epsilon: f64,
    pub max_iterations: usize,
    pub init: Init,
    pub alpha: f64,
}

impl Default for Scenario {
    fn default() -> Self {
        let base = SelfConConfig::default();
        Self {
            signal: Signal::Function(TestFunction::Heavisine),
            n: 512,
            snr: 7.0,
            missing_fraction: 0.3,
            missing_kind: MissingKind::Random,
            algorithms: alloc::vec![
                AlgorithmId::Sim,
                AlgorithmId::SimI,
                AlgorithmId::Ref,
                AlgorithmId::RefI,
                AlgorithmId::RefA,
                AlgorithmId::RefAI,
                AlgorithmId::UniComp,
            ],
            replicates: 100,
            seed: 0,
            wavelet: base.wavelet,
            policy: base.policy,
            imputations: base.imputations,
            epsilon: base.epsilon,
            max_iterations: base.max_iterations,
            init: base.init,
            alpha: DEFAULT_ALPHA,
        }
    }
}

/// Data shared by all algorithms of one replicate.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplicateData {
    pub replicate: usize,
    pub truth: Vec<f64>,
    /// Noisy responses on the full grid, missing points included.
    pub y: Vec<f64>,
    pub sigma: f64,
    pub mask: ResponseIndicator,
    pub obs: ObservationSet,
    /// Seed for algorithm-internal randomness (MISC draws).
    pub algorithm_seed: u64,
}

impl Scenario {
    pub fn grid(&self) -> Grid {
        match self.signal {
            Signal::SyntheticImage => Grid::Square(self.n),
            _ => Grid::Line(self.n),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Signal::UserSupplied(v) = &self.signal {
            if v.len() != self.n {
                return Err(Error::LengthMismatch {
                    expected: self.n,
                    actual: v.len(),
                });
            }
        }
        if self.algorithms.is_empty() {
            return Err(Error::invalid("scenario lists no algorithms"));
        }
        if self.replicates == 0 {
            return Err(Error::invalid("replicates must be at least 1"));
        }
        if self.grid().is_2d() {
            if let Some(a) = self.algorithms.iter().find(|a| a.interpolates()) {
                return Err(Error::Unsupported(format!(
                    "{a} uses the 1D interpolation hybrid"
                )));
            }
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::invalid("alpha must lie in (0, 1)"));
        }
        Transform::new(self.wavelet, self.grid())?;
        self.config(AlgorithmId::Sim, 0).validate()
    }

    pub fn truth(&self) -> Result<Vec<f64>> {
        match &self.signal {
            Signal::Function(f) => f.sample(self.n),
            Signal::SyntheticImage => synthetic_image(self.n),
            Signal::UserSupplied(v) => Ok(v.clone()),
        }
    }

    /// Engine configuration for `algorithm` (ignored for UniComp).
    pub fn config(&self, algorithm: AlgorithmId, seed: u64) -> SelfConConfig {
        use AlgorithmId::*;
        SelfConConfig {
            wavelet: self.wavelet,
            policy: self.policy,
            epsilon: self.epsilon,
            max_iterations: self.max_iterations,
            imputations: self.imputations,
            eta_mode: if matches!(algorithm, RefA | RefAI) {
                EtaMode::Average
            } else {
                EtaMode::Exact
            },
            interpolation: if algorithm.interpolates() {
                Interpolation::Linear
            } else {
                Interpolation::None
            },
            init: self.init,
            seed,
            inflate: algorithm != SimNaive,
        }
    }

    /// Truth, noise and mask for replicate `r`; a pure function of
    /// `(scenario, r)`.
    pub fn replicate_data(&self, r: usize) -> Result<ReplicateData> {
        let truth = self.truth()?;
        self.replicate_data_with(&truth, r)
    }

    fn replicate_data_with(&self, truth: &[f64], r: usize) -> Result<ReplicateData> {
        let sigma = apply_snr(truth, self.snr)?;
        let mut rng = substream(self.seed, purpose::NOISE, r as u64, 0);
        let y: Vec<f64> = truth
            .iter()
            .map(|&f| {
                let z: f64 = StandardNormal.sample(&mut rng);
                f + sigma * z
            })
            .collect();
        let mask_seed = derive_seed(self.seed, &[purpose::MASK, r as u64]);
        let mask = make_missing(
            self.grid(),
            self.missing_fraction,
            self.missing_kind,
            mask_seed,
        )?;
        let obs = ObservationSet::from_mask(self.grid(), &mask, &y)?;
        Ok(ReplicateData {
            replicate: r,
            truth: truth.to_vec(),
            y,
            sigma,
            mask,
            obs,
            algorithm_seed: derive_seed(self.seed, &[purpose::ALGORITHM, r as u64]),
        })
    }
}

/// Runs one algorithm on one replicate. `runtime_ms` is left empty; callers
/// with a clock fill it in.
pub fn run_algorithm(
    scenario: &Scenario,
    data: &ReplicateData,
    algorithm: AlgorithmId,
) -> Result<MetricRow> {
    let tag = |e: Error| Error::Scenario {
        replicate: data.replicate,
        algorithm: algorithm.name().to_string(),
        source: alloc::boxed::Box::new(e),
    };
    let (f_hat, iterations) = if algorithm == AlgorithmId::UniComp {
        let t = Transform::new(scenario.wavelet, scenario.grid()).map_err(tag)?;
        let (f, _) = shrink_complete(&t, &data.y, &scenario.policy).map_err(tag)?;
        (f, 1)
    } else {
        let config = scenario.config(algorithm, data.algorithm_seed);
        let shrinker = GaussianShrinker::new(scenario.policy);
        let method = match algorithm {
            AlgorithmId::Sim | AlgorithmId::SimI | AlgorithmId::SimNaive => Method::Sim,
            AlgorithmId::Misc | AlgorithmId::MiscI => Method::Misc {
                shrinker: &shrinker,
                noise: NoiseFamily::Gaussian,
            },
            _ => Method::Ref,
        };
        let report = estimate(&data.obs, &config, method, None).map_err(tag)?;
        (report.f_hat, report.iterations)
    };
    let m = metrics(&data.truth, &f_hat, &data.y, &data.mask).map_err(tag)?;
    Ok(MetricRow {
        algorithm,
        replicate: data.replicate,
        mse_com: m.mse_com,
        mse_obs: m.mse_obs,
        mse_mis: m.mse_mis,
        mrss_obs: m.mrss_obs,
        runtime_ms: None,
        iterations,
    })
}

/// All configured algorithms on replicate `r`, in scenario order.
pub fn run_replicate(scenario: &Scenario, r: usize) -> Result<Vec<MetricRow>> {
    let data = scenario.replicate_data(r)?;
    scenario
        .algorithms
        .iter()
        .map(|&a| run_algorithm(scenario, &data, a))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub algorithm: AlgorithmId,
    pub mse_com: f64,
    pub mse_obs: f64,
    pub mse_mis: Option<f64>,
    pub mrss_obs: f64,
    pub iterations: f64,
    /// Median paired ratios against UniComp, when it was run.
    pub r_com: Option<f64>,
    pub r_obs: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricRanks {
    pub metric: Metric,
    pub table: RankTable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub scenario: Scenario,
    pub medians: Vec<AlgorithmSummary>,
    /// Empty when fewer than two ranked algorithms or too few replicates.
    pub ranks: Vec<MetricRanks>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioOutcome {
    /// Sorted by `(replicate, algorithm)`.
    pub rows: Vec<MetricRow>,
    pub summary: Summary,
}

/// Serial driver. Parallel drivers can call [`run_replicate`] per replicate
/// and hand the rows to [`summarize`].
pub fn run_scenario(scenario: &Scenario) -> Result<ScenarioOutcome> {
    scenario.validate()?;
    let truth = scenario.truth()?;
    let mut rows = Vec::with_capacity(scenario.replicates * scenario.algorithms.len());
    for r in 0..scenario.replicates {
        let data = scenario.replicate_data_with(&truth, r)?;
        for &a in &scenario.algorithms {
            rows.push(run_algorithm(scenario, &data, a)?);
        }
    }
    let summary = summarize(scenario, &mut rows)?;
    Ok(ScenarioOutcome { rows, summary })
}

/// Per-replicate values of `metric` for `algorithm`, in replicate order.
pub fn column(rows: &[MetricRow], algorithm: AlgorithmId, metric: Metric) -> Vec<f64> {
    let mut sel: Vec<&MetricRow> = rows.iter().filter(|r| r.algorithm == algorithm).collect();
    sel.sort_by_key(|r| r.replicate);
    sel.into_iter().filter_map(|r| r.metric(metric)).collect()
}

/// Sorts `rows` by `(replicate, algorithm)` and computes medians, UniComp
/// ratios and per-metric rank tables (UniComp is not ranked).
pub fn summarize(scenario: &Scenario, rows: &mut [MetricRow]) -> Result<Summary> {
    rows.sort_by_key(|r| (r.replicate, r.algorithm));
    let has_base = scenario.algorithms.contains(&AlgorithmId::UniComp);
    let mut medians = Vec::new();
    for &a in &scenario.algorithms {
        let med = |m: Metric| median(&column(rows, a, m));
        let ratio = |m: Metric| -> Result<Option<f64>> {
            if !has_base {
                return Ok(None);
            }
            let base = column(rows, AlgorithmId::UniComp, m);
            let vals = column(rows, a, m);
            Ok(median(&super::metrics::mse_ratios(&vals, &base)?))
        };
        let iters: Vec<f64> = rows
            .iter()
            .filter(|r| r.algorithm == a)
            .map(|r| r.iterations as f64)
            .collect();
        medians.push(AlgorithmSummary {
            algorithm: a,
            mse_com: med(Metric::MseCom).unwrap_or(f64::NAN),
            mse_obs: med(Metric::MseObs).unwrap_or(f64::NAN),
            mse_mis: med(Metric::MseMis),
            mrss_obs: med(Metric::MrssObs).unwrap_or(f64::NAN),
            iterations: median(&iters).unwrap_or(f64::NAN),
            r_com: ratio(Metric::MseCom)?,
            r_obs: ratio(Metric::MseObs)?,
        });
    }
    let ranked: Vec<AlgorithmId> = scenario
        .algorithms
        .iter()
        .copied()
        .filter(|&a| a != AlgorithmId::UniComp)
        .collect();
    let mut ranks = Vec::new();
    if ranked.len() >= 2 && scenario.replicates >= MIN_REPLICATES {
        for metric in Metric::ALL {
            let cols: Vec<Vec<f64>> = ranked.iter().map(|&a| column(rows, a, metric)).collect();
            if cols.iter().any(|c| c.len() < MIN_REPLICATES) {
                continue;
            }
            let groups: Vec<(&str, &[f64])> = ranked
                .iter()
                .zip(&cols)
                .map(|(a, c)| (a.name(), c.as_slice()))
                .collect();
            ranks.push(MetricRanks {
                metric,
                table: rank_table(&groups, scenario.alpha)?,
            });
        }
    }
    Ok(Summary {
        scenario: scenario.clone(),
        medians,
        ranks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn small() -> Scenario {
        Scenario {
            n: 128,
            replicates: 2,
            algorithms: vec![AlgorithmId::Sim, AlgorithmId::RefA, AlgorithmId::UniComp],
            ..Scenario::default()
        }
    }

    #[test]
    fn unicomp_on_complete_data() {
        let s = Scenario {
            replicates: 1,
            missing_fraction: 0.0,
            algorithms: vec![AlgorithmId::UniComp],
            ..small()
        };
        let out = run_scenario(&s).unwrap();
        assert_eq!(out.rows.len(), 1);
        let row = &out.rows[0];
        assert_eq!(row.mse_obs, row.mse_com);
        assert_eq!(row.mse_mis, None);
        assert_eq!(out.summary.medians[0].r_com, Some(1.0));
    }

    #[test]
    fn deterministic_and_paired() {
        let a = run_scenario(&small()).unwrap();
        let b = run_scenario(&small()).unwrap();
        assert_eq!(a, b);
        let d0 = small().replicate_data(0).unwrap();
        let d1 = small().replicate_data(1).unwrap();
        assert_ne!(d0.y, d1.y);
        assert_ne!(d0.mask, d1.mask);
        for row in &a.rows {
            let n = 128.0;
            let n_obs = d0.mask.n_observed() as f64;
            let lhs = n * row.mse_com;
            let rhs = n_obs * row.mse_obs + (n - n_obs) * row.mse_mis.unwrap();
            assert!((lhs - rhs).abs() < 1e-9);
        }
    }

    #[test]
    fn algorithm_names_parse() {
        for a in AlgorithmId::ALL {
            assert_eq!(a.name().parse::<AlgorithmId>().unwrap(), a);
        }
        assert_eq!("ref-ai".parse::<AlgorithmId>().unwrap(), AlgorithmId::RefAI);
        assert!("foo".parse::<AlgorithmId>().is_err());
    }

    #[test]
    fn rejects_interpolation_in_2d() {
        let s = Scenario {
            signal: Signal::SyntheticImage,
            n: 32,
            algorithms: vec![AlgorithmId::SimI],
            ..small()
        };
        assert!(matches!(s.validate(), Err(Error::Unsupported(_))));
    }
}
