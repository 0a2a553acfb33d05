// SPDX-License-Identifier: MIT OR Apache-2.0

use alloc::vec::Vec;

use super::ObservationSet;
use crate::{Error, Result};

/// Replaces the estimate at each missing point by linear interpolation
/// between the estimate at its nearest observed neighbours. Missing points
/// outside the observed range copy the nearest observed point's estimate.
/// Observed points are left untouched.
pub fn interpolate_hybrid(f_hat: &[f64], obs: &ObservationSet) -> Result<Vec<f64>> {
    let mut f = f_hat.to_vec();
    interpolate_in_place(&mut f, obs)?;
    Ok(f)
}

pub(crate) fn interpolate_in_place(f: &mut [f64], obs: &ObservationSet) -> Result<()> {
    if obs.grid().is_2d() {
        return Err(Error::Unsupported(
            "linear interpolation hybrid is defined for 1D grids only".into(),
        ));
    }
    if f.len() != obs.len() {
        return Err(Error::LengthMismatch {
            expected: obs.len(),
            actual: f.len(),
        });
    }
    let idx = obs.observed_indices();
    let (first, last) = (idx[0], idx[idx.len() - 1]);
    let head = f[first];
    f[..first].fill(head);
    let tail = f[last];
    f[last + 1..].fill(tail);
    for pair in idx.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if b - a < 2 {
            continue;
        }
        let (fa, fb) = (f[a], f[b]);
        let span = (b - a) as f64;
        for (k, v) in f[a + 1..b].iter_mut().enumerate() {
            *v = fa + (fb - fa) / span * (k + 1) as f64;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Grid;
    use alloc::vec;

    #[test]
    fn midpoint_and_boundaries() {
        let obs = ObservationSet::new(Grid::Line(8), vec![2, 4], vec![0.0, 0.0]).unwrap();
        let f = vec![9.0, 9.0, 0.0, 7.0, 1.0, 9.0, 9.0, 9.0];
        let g = interpolate_hybrid(&f, &obs).unwrap();
        assert_eq!(g, vec![0.0, 0.0, 0.0, 0.5, 1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn linear_estimate_is_fixed() {
        let obs = ObservationSet::new(Grid::Line(16), vec![0, 3, 4, 9, 15], vec![0.0; 5]).unwrap();
        let f: Vec<f64> = (0..16).map(|i| 2.0 * i as f64 - 3.0).collect();
        let g = interpolate_hybrid(&f, &obs).unwrap();
        for (a, b) in f.iter().zip(&g) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_square_grids() {
        let obs = ObservationSet::new(Grid::Square(4), vec![0, 5], vec![0.0; 2]).unwrap();
        assert!(interpolate_hybrid(&[0.0; 16], &obs).is_err());
    }
}
