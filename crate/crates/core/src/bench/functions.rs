// SPDX-License-Identifier: MIT OR Apache-2.0

//! Donoho–Johnstone test signals and a synthetic piecewise-smooth image.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::stats::population_sd;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TestFunction {
    Blocks,
    Bumps,
    Heavisine,
    Doppler,
}

impl TestFunction {
    pub const ALL: [TestFunction; 4] = [Self::Blocks, Self::Bumps, Self::Heavisine, Self::Doppler];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Blocks => "blocks",
            Self::Bumps => "bumps",
            Self::Heavisine => "heavisine",
            Self::Doppler => "doppler",
        }
    }

    /// Value at `t ∈ [0, 1)`.
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Self::Blocks => blocks(t),
            Self::Bumps => bumps(t),
            Self::Heavisine => heavisine(t),
            Self::Doppler => doppler(t),
        }
    }

    /// Samples at `x_i = i/n`, `i = 0..n`.
    pub fn sample(&self, n: usize) -> Result<Vec<f64>> {
        if n < 8 {
            return Err(Error::invalid("test functions need N >= 8"));
        }
        Ok((0..n).map(|i| self.eval(i as f64 / n as f64)).collect())
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "blocks" => Ok(Self::Blocks),
            "bumps" => Ok(Self::Bumps),
            "heavisine" => Ok(Self::Heavisine),
            "doppler" => Ok(Self::Doppler),
            other => Err(Error::invalid(alloc::format!(
                "unknown test function `{other}`"
            ))),
        }
    }
}

pub const JUMP_POSITIONS: [f64; 11] = [
    0.10, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81,
];
const BLOCK_HEIGHTS: [f64; 11] = [4.0, -5.0, 3.0, -4.0, 5.0, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2];
const BUMP_HEIGHTS: [f64; 11] = [4.0, 5.0, 3.0, 4.0, 5.0, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2];
const BUMP_WIDTHS: [f64; 11] = [
    0.005, 0.005, 0.006, 0.01, 0.01, 0.03, 0.01, 0.01, 0.005, 0.008, 0.005,
];

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Steps switch on at `t ≥ position`.
pub fn blocks(t: f64) -> f64 {
    JUMP_POSITIONS
        .iter()
        .zip(BLOCK_HEIGHTS)
        .filter(|(&p, _)| t >= p)
        .map(|(_, h)| h)
        .sum()
}

pub fn bumps(t: f64) -> f64 {
    JUMP_POSITIONS
        .iter()
        .zip(BUMP_HEIGHTS.iter().zip(BUMP_WIDTHS))
        .map(|(&p, (&h, w))| h / libm::pow(1.0 + ((t - p) / w).abs(), 4.0))
        .sum()
}

pub fn heavisine(t: f64) -> f64 {
    4.0 * libm::sin(4.0 * PI * t) - sgn(t - 0.3) - sgn(0.72 - t)
}

pub fn doppler(t: f64) -> f64 {
    libm::sqrt(t * (1.0 - t)) * libm::sin(2.0 * PI * 1.05 / (t + 0.05))
}

/// Piecewise-smooth `n×n` test image (row-major): a smooth background with
/// a bright disc, a dark rectangle and a soft ridge.
pub fn synthetic_image(n: usize) -> Result<Vec<f64>> {
    if n < 8 {
        return Err(Error::invalid("synthetic image needs side >= 8"));
    }
    let mut img = Vec::with_capacity(n * n);
    for r in 0..n {
        let v = r as f64 / n as f64;
        for c in 0..n {
            let u = c as f64 / n as f64;
            let mut z = 0.5 * libm::sin(2.0 * PI * u) * libm::cos(PI * v) + u;
            let (du, dv) = (u - 0.35, v - 0.4);
            if du * du + dv * dv < 0.18 * 0.18 {
                z += 2.0;
            }
            if (0.6..0.85).contains(&u) && (0.55..0.8).contains(&v) {
                z -= 1.5;
            }
            let ridge = (u + v - 1.2) / 0.05;
            z += 0.8 * libm::exp(-0.5 * ridge * ridge);
            img.push(z);
        }
    }
    Ok(img)
}

/// Noise scale giving `sd(f) / σ = snr` (population sd over the grid).
pub fn apply_snr(f: &[f64], snr: f64) -> Result<f64> {
    if !(snr > 0.0) {
        return Err(Error::invalid("snr must be positive"));
    }
    let sd = population_sd(f);
    if !(sd > 0.0) {
        return Err(Error::invalid("cannot set snr for a constant signal"));
    }
    Ok(sd / snr)
}
