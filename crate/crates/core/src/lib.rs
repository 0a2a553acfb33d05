// SPDX-License-Identifier: MIT OR Apache-2.0

//! Self-consistent wavelet regression for incomplete and irregularly spaced data.
//!
//! Irregular designs are treated as a regular dyadic grid with missing
//! responses. The estimators here solve the self-consistency fixed point
//! `E[f_com | y_obs, f = f_obs] = f_obs` with three engines:
//!
//! - [`selfcon::run_misc`]: Monte Carlo multiple imputation around any
//!   complete-data [`shrinkage::Shrinker`].
//! - [`selfcon::run_sim`]: single deterministic imputation with variance
//!   inflation of the noise scale.
//! - [`selfcon::run_ref`]: closed-form conditional mean of the thresholded
//!   coefficient, using either exact per-coefficient irregularities or their
//!   average (the RefA variant).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! parallel drivers live in the `wavesc` companion crate.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bench;
mod error;
pub mod imputation;
pub mod rng;
pub mod selfcon;
pub mod shrinkage;
pub mod stats;
pub mod transform;

pub use error::{Error, Result};
pub use transform::{
    CoefficientArray, Family, Grid, IrregularityMap, ResponseIndicator, Transform, WaveletSpec,
};
