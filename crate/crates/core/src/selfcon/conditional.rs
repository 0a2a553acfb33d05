// SPDX-License-Identifier: MIT OR Apache-2.0

//! Closed-form conditional means of thresholded coefficients.
//!
//! Given the completed-data coefficient `w`, the complete-data coefficient
//! is `N(w, τ²)` with `τ = η σ`. With `a = (c − w)/τ` and `b = (c + w)/τ`:
//!
//! ```text
//! E[1(|W| ≥ c) W]                 = τ(φ(a) − φ(b)) + (2 − Φ(a) − Φ(b)) w
//! E[1(|W| ≥ c) sign(W)(|W| − c)]  = hard + c(Φ(a) − Φ(b))
//! ```
//!
//! Tail probabilities are evaluated through the upper-tail function to avoid
//! cancellation when `|w|` is far from `c`.

use crate::shrinkage::{hard, soft};
use crate::stats::{normal_pdf, normal_sf};

#[inline]
fn tau(eta_sq: f64, sigma: f64) -> f64 {
    libm::sqrt(eta_sq.max(0.0)) * sigma
}

/// `(α, β)` such that the hard-threshold conditional mean is `α + β w`.
/// Returns `None` when `τ = 0`.
pub fn alpha_beta(w: f64, eta_sq: f64, sigma: f64, c: f64) -> Option<(f64, f64)> {
    let t = tau(eta_sq, sigma);
    if !(t > 0.0) {
        return None;
    }
    let a = (c - w) / t;
    let b = (c + w) / t;
    Some((
        t * (normal_pdf(a) - normal_pdf(b)),
        normal_sf(a) + normal_sf(b),
    ))
}

/// `E[1(|W| ≥ c) W]` for `W ~ N(w, eta_sq σ²)`; plain hard thresholding
/// when the variance is zero.
pub fn conditional_mean_hard(w: f64, eta_sq: f64, sigma: f64, c: f64) -> f64 {
    match alpha_beta(w, eta_sq, sigma, c) {
        Some((alpha, beta)) => alpha + beta * w,
        None => hard(w, c),
    }
}

/// `E[1(|W| ≥ c) sign(W)(|W| − c)]` for `W ~ N(w, eta_sq σ²)`; plain soft
/// thresholding when the variance is zero.
pub fn conditional_mean_soft(w: f64, eta_sq: f64, sigma: f64, c: f64) -> f64 {
    let t = tau(eta_sq, sigma);
    if !(t > 0.0) {
        return soft(w, c);
    }
    let a = (c - w) / t;
    let b = (c + w) / t;
    conditional_mean_hard(w, eta_sq, sigma, c) + c * (normal_sf(b) - normal_sf(a))
}
