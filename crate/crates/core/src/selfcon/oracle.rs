// SPDX-License-Identifier: MIT OR Apache-2.0

//! The impute-and-refit iteration for a least-squares slope through the
//! origin. Its limit is the slope fitted to the observed points alone, which
//! makes it a small, exactly checkable instance of the self-consistency
//! fixed point.

use alloc::vec::Vec;

use crate::{Error, Result};

const TOLERANCE: f64 = 1e-12;
const MAX_STEPS: usize = 10_000;

/// Full-data least-squares slope `Σ x y / Σ x²`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let sxx: f64 = x.iter().map(|a| a * a).sum();
    sxy / sxx
}

/// Iterates `β ← slope(x, [y_1..y_m, β x_{m+1}, …, β x_n])` from `seed_beta`
/// until successive values differ by less than `1e-12`.
///
/// Only the first `m` entries of `y` are read.
pub fn ls_fixed_point_oracle(x: &[f64], y: &[f64], m: usize, seed_beta: f64) -> Result<f64> {
    let n = x.len();
    if m >= n || y.len() < m {
        return Err(Error::invalid("need m < n observed responses"));
    }
    if !(x[..m].iter().map(|v| v * v).sum::<f64>() > 0.0) {
        return Err(Error::invalid("observed design has zero energy"));
    }
    let mut completed: Vec<f64> = x.iter().map(|xi| seed_beta * xi).collect();
    completed[..m].copy_from_slice(&y[..m]);
    let mut beta = seed_beta;
    for _ in 0..MAX_STEPS {
        for (c, xi) in completed[m..].iter_mut().zip(&x[m..]) {
            *c = beta * xi;
        }
        let next = ls_slope(x, &completed);
        if (next - beta).abs() < TOLERANCE {
            return Ok(next);
        }
        beta = next;
    }
    Err(Error::Diverged(MAX_STEPS))
}
