// SPDX-License-Identifier: MIT OR Apache-2.0

//! Per-coefficient missing-information fractions.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{Slot, Transform};
use crate::{Error, Result};

/// Boolean observed/missing mask over a grid.
///
/// An all-missing mask is representable (its irregularity map is all ones);
/// estimators require at least two observed points and check that
/// themselves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResponseIndicator {
    mask: Vec<bool>,
    n_observed: usize,
}

impl ResponseIndicator {
    pub fn new(mask: Vec<bool>) -> Self {
        let n_observed = mask.iter().filter(|&&b| b).count();
        Self { mask, n_observed }
    }

    pub fn full(len: usize) -> Self {
        Self::new(vec![true; len])
    }

    pub fn from_observed(len: usize, observed: &[usize]) -> Result<Self> {
        let mut mask = vec![false; len];
        for &i in observed {
            if i >= len || mask[i] {
                return Err(Error::BadIndex(i));
            }
            mask[i] = true;
        }
        Ok(Self::new(mask))
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_empty()
    }

    pub fn n_observed(&self) -> usize {
        self.n_observed
    }

    pub fn n_missing(&self) -> usize {
        self.mask.len() - self.n_observed
    }

    #[inline]
    pub fn is_observed(&self, i: usize) -> bool {
        self.mask[i]
    }

    /// Fraction of missing points, `1 - n/N`.
    pub fn missing_fraction(&self) -> f64 {
        self.n_missing() as f64 / self.mask.len() as f64
    }

    pub fn observed_indices(&self) -> Vec<usize> {
        self.indices(true)
    }

    pub fn missing_indices(&self) -> Vec<usize> {
        self.indices(false)
    }

    fn indices(&self, observed: bool) -> Vec<usize> {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == observed)
            .map(|(i, _)| i)
            .collect()
    }
}

/// `η²_l`: diagonal of `I − W R Wᵀ`, one entry per flat coefficient index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IrregularityMap {
    pub eta_sq: Vec<f64>,
}

impl IrregularityMap {
    /// Every entry set to the missing fraction.
    pub fn average(missing_fraction: f64, len: usize) -> Self {
        Self {
            eta_sq: vec![missing_fraction; len],
        }
    }

    pub fn mean(&self) -> f64 {
        self.eta_sq.iter().sum::<f64>() / self.eta_sq.len() as f64
    }

    /// `(flat_index, level, position, eta_sq)` rows. Scaling coefficients
    /// report level `-1`.
    pub fn rows(&self, transform: &Transform) -> Vec<(usize, i64, usize, f64)> {
        let layout = transform.layout();
        self.eta_sq
            .iter()
            .enumerate()
            .map(|(i, &e)| match layout.slot(i) {
                Slot::Scaling { position } => (i, -1, position, e),
                Slot::Detail { level, position } => (i, i64::from(level), position, e),
            })
            .collect()
    }
}

/// Computes `η²_l = Σ_{i missing} W_{l,i}²` by transforming each missing
/// unit vector. Cost is `O(N_mis · N)`; `W` is never materialized.
pub fn irregularity_map(
    mask: &ResponseIndicator,
    transform: &Transform,
) -> Result<IrregularityMap> {
    let n = transform.len();
    if mask.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: mask.len(),
        });
    }
    let mut eta_sq = vec![0.0; n];
    let mut unit = vec![0.0; n];
    for i in mask.missing_indices() {
        unit.fill(0.0);
        unit[i] = 1.0;
        transform.forward_in_place(&mut unit);
        for (acc, w) in eta_sq.iter_mut().zip(&unit) {
            *acc += w * w;
        }
    }
    for e in &mut eta_sq {
        *e = e.clamp(0.0, 1.0);
    }
    Ok(IrregularityMap { eta_sq })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::{Grid, WaveletSpec};

    #[test]
    fn full_and_empty_masks() {
        let t = Transform::new(WaveletSpec::d5(), Grid::Line(64)).unwrap();
        let full = irregularity_map(&ResponseIndicator::full(64), &t).unwrap();
        assert!(full.eta_sq.iter().all(|&e| e == 0.0));
        let empty = irregularity_map(&ResponseIndicator::new(vec![false; 64]), &t).unwrap();
        assert!(empty.eta_sq.iter().all(|&e| (e - 1.0).abs() < 1e-12));
    }

    #[test]
    fn from_observed_rejects_duplicates() {
        assert_eq!(
            ResponseIndicator::from_observed(4, &[0, 2, 2]),
            Err(Error::BadIndex(2))
        );
        assert_eq!(
            ResponseIndicator::from_observed(4, &[5]),
            Err(Error::BadIndex(5))
        );
        let m = ResponseIndicator::from_observed(4, &[1, 3]).unwrap();
        assert_eq!(m.missing_indices(), vec![0, 2]);
        assert_eq!(m.missing_fraction(), 0.5);
    }
}
