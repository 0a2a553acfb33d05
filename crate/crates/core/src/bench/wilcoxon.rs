// SPDX-License-Identifier: MIT OR Apache-2.0

//! Two-sided Wilcoxon rank-sum tests and win-count rankings.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::stats::{median, normal_sf};
use crate::{Error, Result};

/// Default significance level, `0.05 / 4`.
pub const DEFAULT_ALPHA: f64 = 0.0125;
/// Minimum replicates per group for [`rank_table`].
pub const MIN_REPLICATES: usize = 10;

const EXACT_MAX_SMALL: usize = 10;
const EXACT_MAX_TOTAL: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankSumTest {
    /// Rank sum of the first sample (midranks for ties).
    pub w: f64,
    pub p_value: f64,
    pub exact: bool,
}

/// Midranks of the pooled sample, first `a` then `b`.
fn pooled_midranks(a: &[f64], b: &[f64]) -> Vec<f64> {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&i, &j| pooled[i].total_cmp(&pooled[j]));
    let mut ranks = vec![0.0; pooled.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && pooled[order[j]] == pooled[order[i]] {
            j += 1;
        }
        let r = (i + j + 1) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = r;
        }
        i = j;
    }
    ranks
}

fn check(a: &[f64], b: &[f64]) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InsufficientReplicates {
            required: 1,
            actual: 0,
        });
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return Err(Error::invalid("rank-sum samples contain NaN"));
    }
    Ok(())
}

/// Exact permutation p-value: the null distribution of the (doubled,
/// integer) rank sum over all `C(n+m, n)` splits, ties included.
pub fn exact_p_value(a: &[f64], b: &[f64]) -> Result<f64> {
    check(a, b)?;
    let ranks = pooled_midranks(a, b);
    let doubled: Vec<usize> = ranks
        .iter()
        .map(|r| libm::round(2.0 * r) as usize)
        .collect();
    let k = a.len();
    let total: usize = doubled.iter().sum();
    // counts[j][s]: subsets of size j with doubled rank sum s
    let mut counts = vec![vec![0.0f64; total + 1]; k + 1];
    counts[0][0] = 1.0;
    for &r in &doubled {
        for j in (1..=k).rev() {
            let (lo, hi) = counts.split_at_mut(j);
            for s in (r..=total).rev() {
                hi[0][s] += lo[j - 1][s - r];
            }
        }
    }
    let observed: usize = doubled[..k].iter().sum();
    let n_total = doubled.len();
    let mean2 = (k * (n_total + 1)) as f64;
    let dev = (observed as f64 - mean2).abs();
    let (mut tail, mut all) = (0.0, 0.0);
    for (s, &c) in counts[k].iter().enumerate() {
        all += c;
        if (s as f64 - mean2).abs() >= dev - 1e-9 {
            tail += c;
        }
    }
    Ok((tail / all).min(1.0))
}

/// Normal approximation with tie-corrected variance and continuity correction.
pub fn normal_p_value(a: &[f64], b: &[f64]) -> Result<f64> {
    check(a, b)?;
    let ranks = pooled_midranks(a, b);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let total = n + m;
    let w: f64 = ranks[..a.len()].iter().sum();
    let mean = n * (total + 1.0) / 2.0;
    let mut sorted = ranks.clone();
    sorted.sort_by(f64::total_cmp);
    let mut ties = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        ties += t * t * t - t;
        i = j;
    }
    let var = n * m / 12.0 * ((total + 1.0) - ties / (total * (total - 1.0)));
    if !(var > 0.0) {
        return Ok(1.0);
    }
    let z = (((w - mean).abs() - 0.5).max(0.0)) / libm::sqrt(var);
    Ok((2.0 * normal_sf(z)).min(1.0))
}

/// Exact when the smaller sample has at most 10 points (and the pooled size
/// keeps enumeration cheap), normal approximation otherwise.
pub fn rank_sum_test(a: &[f64], b: &[f64]) -> Result<RankSumTest> {
    check(a, b)?;
    let w = pooled_midranks(a, b)[..a.len()].iter().sum();
    let exact = a.len().min(b.len()) <= EXACT_MAX_SMALL && a.len() + b.len() <= EXACT_MAX_TOTAL;
    let p_value = if exact {
        exact_p_value(a, b)?
    } else {
        normal_p_value(a, b)?
    };
    Ok(RankSumTest { w, p_value, exact })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub name: alloc::string::String,
    pub median: f64,
    pub wins: usize,
    pub rank: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairTest {
    pub first: alloc::string::String,
    pub second: alloc::string::String,
    pub p_value: f64,
    pub significant: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankTable {
    pub alpha: f64,
    pub entries: Vec<RankEntry>,
    pub pairs: Vec<PairTest>,
}

/// Ranks groups (smaller is better) by their number of significant pairwise
/// wins; a win is a significant test with the lower median. Equal win
/// counts share the averaged rank.
pub fn rank_table(groups: &[(&str, &[f64])], alpha: f64) -> Result<RankTable> {
    if groups.len() < 2 {
        return Err(Error::invalid("ranking needs at least two groups"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid("alpha must lie in (0, 1)"));
    }
    if let Some(short) = groups
        .iter()
        .map(|(_, s)| s.len())
        .find(|&l| l < MIN_REPLICATES)
    {
        return Err(Error::InsufficientReplicates {
            required: MIN_REPLICATES,
            actual: short,
        });
    }
    let medians: Vec<f64> = groups
        .iter()
        .map(|(_, s)| median(s).unwrap_or(f64::NAN))
        .collect();
    let mut wins = vec![0usize; groups.len()];
    let mut pairs = Vec::new();
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            let t = rank_sum_test(groups[i].1, groups[j].1)?;
            let significant = t.p_value < alpha;
            if significant {
                if medians[i] < medians[j] {
                    wins[i] += 1;
                } else if medians[j] < medians[i] {
                    wins[j] += 1;
                }
            }
            pairs.push(PairTest {
                first: groups[i].0.into(),
                second: groups[j].0.into(),
                p_value: t.p_value,
                significant,
            });
        }
    }
    let ranks = averaged_ranks(&wins);
    let entries = groups
        .iter()
        .enumerate()
        .map(|(i, (name, _))| RankEntry {
            name: (*name).into(),
            median: medians[i],
            wins: wins[i],
            rank: ranks[i],
        })
        .collect();
    Ok(RankTable {
        alpha,
        entries,
        pairs,
    })
}

/// Rank 1 for the most wins; ties get the mean of the positions they span.
fn averaged_ranks(wins: &[usize]) -> Vec<f64> {
    wins.iter()
        .map(|&w| {
            let better = wins.iter().filter(|&&v| v > w).count();
            let equal = wins.iter().filter(|&&v| v == w).count();
            better as f64 + (equal as f64 + 1.0) / 2.0
        })
        .collect()
}
