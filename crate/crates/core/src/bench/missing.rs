// SPDX-License-Identifier: MIT OR Apache-2.0

//! Missingness patterns.

use alloc::format;
use alloc::vec;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rng::{purpose, substream};
use crate::transform::{Grid, ResponseIndicator};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum MissingKind {
    /// Uniform sample without replacement.
    #[default]
    Random,
    /// Union of random runs (1D) or axis-aligned rectangles (2D) with
    /// sides uniform on `[4, 16]`, trimmed to the exact target count.
    Clustered,
}

/// Number of missing points: `round(C_m · N)`.
pub fn missing_count(len: usize, missing_fraction: f64) -> usize {
    libm::round(missing_fraction * len as f64) as usize
}

pub fn make_missing(
    grid: Grid,
    missing_fraction: f64,
    kind: MissingKind,
    seed: u64,
) -> Result<ResponseIndicator> {
    if !(0.0..1.0).contains(&missing_fraction) {
        return Err(Error::InfeasibleMissing(format!(
            "missing fraction {missing_fraction} outside [0, 1)"
        )));
    }
    let len = grid.len();
    let target = missing_count(len, missing_fraction);
    if missing_fraction > 0.0 && target == 0 {
        return Err(Error::InfeasibleMissing(format!(
            "C_m = {missing_fraction} deletes no points of {len}"
        )));
    }
    if len < target + 2 {
        return Err(Error::InfeasibleMissing(format!(
            "deleting {target} of {len} leaves fewer than 2 observed"
        )));
    }
    let mut rng = substream(seed, purpose::MASK, 0, 0);
    let mut mask = vec![true; len];
    match kind {
        MissingKind::Random => {
            for i in sample(&mut rng, len, target) {
                mask[i] = false;
            }
        }
        MissingKind::Clustered => {
            let side = grid.side();
            let mut removed = 0;
            while removed < target {
                match grid {
                    Grid::Line(_) => {
                        let w = rng.random_range(4..=16usize).min(side);
                        let start = rng.random_range(0..=side - w);
                        for m in &mut mask[start..start + w] {
                            if removed < target && *m {
                                *m = false;
                                removed += 1;
                            }
                        }
                    }
                    Grid::Square(_) => {
                        let h = rng.random_range(4..=16usize).min(side);
                        let w = rng.random_range(4..=16usize).min(side);
                        let r0 = rng.random_range(0..=side - h);
                        let c0 = rng.random_range(0..=side - w);
                        for r in r0..r0 + h {
                            for c in c0..c0 + w {
                                let m = &mut mask[r * side + c];
                                if removed < target && *m {
                                    *m = false;
                                    removed += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(ResponseIndicator::new(mask))
}
