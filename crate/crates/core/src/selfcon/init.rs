// SPDX-License-Identifier: MIT OR Apache-2.0

//! Starting values for the fixed-point iterations.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::ObservationSet;
use crate::shrinkage::{mad_sigma, NoiseScale};
use crate::transform::Transform;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Init {
    /// Tricube-weighted local linear fit using the `span · n` nearest
    /// observed neighbours of each grid point.
    LocalLinear { span: f64 },
    /// Piecewise linear through the observed points, constant beyond them.
    LinearInterp,
    /// Each missing point copies its nearest observed neighbour
    /// (4-connected breadth-first order on square grids).
    NearestFill,
}

impl Default for Init {
    fn default() -> Self {
        Init::LocalLinear { span: 0.10 }
    }
}

impl Init {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Init::LocalLinear { span } if !(span > 0.0 && span <= 1.0) => {
                Err(Error::invalid("local linear span must lie in (0, 1]"))
            }
            _ => Ok(()),
        }
    }
}

/// Initial full-grid curve and noise scale.
///
/// On square grids every choice falls back to [`Init::NearestFill`]. The
/// noise scale is the MAD estimate from the transform of the observed data
/// completed with the initial curve.
pub fn initial_estimate(
    obs: &ObservationSet,
    init: Init,
    transform: &Transform,
) -> Result<(Vec<f64>, NoiseScale)> {
    init.validate()?;
    let f0 = if obs.grid().is_2d() {
        nearest_fill(obs)
    } else {
        match init {
            Init::NearestFill => nearest_fill(obs),
            Init::LinearInterp => linear_interp(obs),
            Init::LocalLinear { span } => local_linear(obs, span),
        }
    };
    let w = transform.forward(&obs.complete_with(&f0))?;
    Ok((f0, mad_sigma(&w)?))
}

pub(crate) fn linear_interp(obs: &ObservationSet) -> Vec<f64> {
    let n = obs.len();
    let idx = obs.observed_indices();
    let y = obs.y_obs();
    let mut f = vec![0.0; n];
    let (first, last) = (idx[0], idx[idx.len() - 1]);
    f[..=first].fill(y[0]);
    f[last..].fill(y[y.len() - 1]);
    for (k, pair) in idx.windows(2).enumerate() {
        let (a, b) = (pair[0], pair[1]);
        let (ya, yb) = (y[k], y[k + 1]);
        let span = (b - a) as f64;
        for (i, v) in f.iter_mut().enumerate().take(b + 1).skip(a) {
            *v = ya + (yb - ya) * (i - a) as f64 / span;
        }
    }
    f
}

fn tricube(u: f64) -> f64 {
    if u >= 1.0 {
        0.0
    } else {
        let t = 1.0 - u * u * u;
        t * t * t
    }
}

pub(crate) fn local_linear(obs: &ObservationSet, span: f64) -> Vec<f64> {
    let idx = obs.observed_indices();
    let y = obs.y_obs();
    let m = idx.len();
    let q = (libm::round(span * m as f64) as usize).clamp(3.min(m), m);
    let mut out = Vec::with_capacity(obs.len());
    let mut right = 0usize;
    let mut window: Vec<usize> = Vec::with_capacity(q);
    for t in 0..obs.len() {
        while right < m && idx[right] < t {
            right += 1;
        }
        // grow the q-nearest window outward from the insertion point
        window.clear();
        let (mut lo, mut hi) = (right, right);
        while window.len() < q {
            let take_left = match (lo > 0, hi < m) {
                (true, true) => t - idx[lo - 1] <= idx[hi] - t,
                (true, false) => true,
                (false, _) => false,
            };
            if take_left {
                lo -= 1;
                window.push(lo);
            } else {
                window.push(hi);
                hi += 1;
            }
        }
        let h = window
            .iter()
            .map(|&j| idx[j].abs_diff(t))
            .max()
            .unwrap_or(0) as f64;
        let (mut sw, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for &j in &window {
            let dx = idx[j] as f64 - t as f64;
            let wgt = if h > 0.0 { tricube(dx.abs() / h) } else { 1.0 };
            sw += wgt;
            sx += wgt * dx;
            sy += wgt * y[j];
            sxx += wgt * dx * dx;
            sxy += wgt * dx * y[j];
        }
        let value = if sw <= 0.0 {
            window.iter().map(|&j| y[j]).sum::<f64>() / window.len() as f64
        } else {
            let det = sw * sxx - sx * sx;
            if det > 1e-12 * sw * sxx.max(1.0) {
                let slope = (sw * sxy - sx * sy) / det;
                (sy - slope * sx) / sw
            } else {
                sy / sw
            }
        };
        out.push(value);
    }
    out
}

pub(crate) fn nearest_fill(obs: &ObservationSet) -> Vec<f64> {
    let n = obs.len();
    let mut f = vec![0.0; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for (&i, &v) in obs.observed_indices().iter().zip(obs.y_obs()) {
        f[i] = v;
        seen[i] = true;
        queue.push_back(i);
    }
    let side = obs.grid().side();
    let two_d = obs.grid().is_2d();
    while let Some(i) = queue.pop_front() {
        let mut neighbours: [Option<usize>; 4] = [None; 4];
        if two_d {
            let (r, c) = (i / side, i % side);
            if r > 0 {
                neighbours[0] = Some(i - side);
            }
            if r + 1 < side {
                neighbours[1] = Some(i + side);
            }
            if c > 0 {
                neighbours[2] = Some(i - 1);
            }
            if c + 1 < side {
                neighbours[3] = Some(i + 1);
            }
        } else {
            if i > 0 {
                neighbours[0] = Some(i - 1);
            }
            if i + 1 < n {
                neighbours[1] = Some(i + 1);
            }
        }
        for j in neighbours.into_iter().flatten() {
            if !seen[j] {
                seen[j] = true;
                f[j] = f[i];
                queue.push_back(j);
            }
        }
    }
    f
}
