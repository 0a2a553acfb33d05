// SPDX-License-Identifier: MIT OR Apache-2.0

//! Simulation harness: test signals, missingness, metrics, rank tests and
//! paired scenario runs.

mod functions;
mod metrics;
mod missing;
mod scenario;
mod wilcoxon;

pub use functions::{
    apply_snr, blocks, bumps, doppler, heavisine, synthetic_image, TestFunction, JUMP_POSITIONS,
};
pub use metrics::{metrics, mse_ratio, mse_ratios, Metric, MetricRow, Metrics};
pub use missing::{make_missing, missing_count, MissingKind};
pub use scenario::{
    column, run_algorithm, run_replicate, run_scenario, summarize, AlgorithmId, AlgorithmSummary,
    MetricRanks, ReplicateData, Scenario, ScenarioOutcome, Signal, Summary,
};
pub use wilcoxon::{
    exact_p_value, normal_p_value, rank_sum_test, rank_table, PairTest, RankEntry, RankSumTest,
    RankTable, DEFAULT_ALPHA, MIN_REPLICATES,
};
