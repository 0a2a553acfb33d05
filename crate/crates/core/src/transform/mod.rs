// SPDX-License-Identifier: MIT OR Apache-2.0

//! Orthogonal periodic discrete wavelet transforms in one and two dimensions.
//!
//! Coefficients use the pyramid layout: the `2^p` scaling coefficients come
//! first, followed by detail levels `p, p+1, …, J-1`, level `j` holding `2^j`
//! coefficients. In 2D the same idea applies to the top-left square blocks
//! of a row-major `N×N` array (Mallat layout).

mod filters;
mod irregularity;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::stats::is_power_of_two;
use crate::{Error, Result};

pub use irregularity::{irregularity_map, IrregularityMap, ResponseIndicator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    Haar,
    Daubechies { vanishing_moments: u8 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Boundary {
    #[default]
    Periodic,
}

/// Wavelet family, boundary rule and primary resolution.
///
/// The decomposition stops once `2^primary_level` scaling coefficients
/// remain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaveletSpec {
    pub family: Family,
    pub boundary: Boundary,
    pub primary_level: u32,
}

impl WaveletSpec {
    pub const fn haar(primary_level: u32) -> Self {
        Self {
            family: Family::Haar,
            boundary: Boundary::Periodic,
            primary_level,
        }
    }

    pub const fn daubechies(vanishing_moments: u8, primary_level: u32) -> Self {
        Self {
            family: Family::Daubechies { vanishing_moments },
            boundary: Boundary::Periodic,
            primary_level,
        }
    }

    /// Daubechies with five vanishing moments, primary resolution 3.
    pub const fn d5() -> Self {
        Self::daubechies(5, 3)
    }

    /// Scaling (low-pass) analysis filter.
    pub fn lowpass(&self) -> Result<&'static [f64]> {
        match self.family {
            Family::Haar => Ok(filters::daubechies(1).expect("haar filter")),
            Family::Daubechies { vanishing_moments } => filters::daubechies(vanishing_moments)
                .ok_or_else(|| {
                    Error::UnsupportedWavelet(format!(
                        "db{vanishing_moments} (supported: db1..db{})",
                        filters::MAX_VANISHING_MOMENTS
                    ))
                }),
        }
    }

    /// Short name such as `haar` or `db5`.
    pub fn name(&self) -> alloc::string::String {
        match self.family {
            Family::Haar => "haar".into(),
            Family::Daubechies { vanishing_moments } => format!("db{vanishing_moments}"),
        }
    }
}

impl Default for WaveletSpec {
    fn default() -> Self {
        Self::d5()
    }
}

/// Shape of a dyadic sampling grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Grid {
    /// `N` samples on a line.
    Line(usize),
    /// `N×N` samples, row-major.
    Square(usize),
}

impl Grid {
    pub fn side(&self) -> usize {
        match *self {
            Grid::Line(n) | Grid::Square(n) => n,
        }
    }

    /// Total number of samples.
    pub fn len(&self) -> usize {
        match *self {
            Grid::Line(n) => n,
            Grid::Square(n) => n * n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_2d(&self) -> bool {
        matches!(self, Grid::Square(_))
    }

    /// `J` with `side = 2^J`.
    pub fn levels(&self) -> u32 {
        self.side().trailing_zeros()
    }

    fn validate(&self, primary_level: u32) -> Result<()> {
        let side = self.side();
        if !is_power_of_two(side) {
            return Err(Error::NotDyadic(side));
        }
        if primary_level >= self.levels() {
            return Err(Error::LevelTooDeep {
                primary_level,
                side,
            });
        }
        Ok(())
    }
}

/// Scale/location of one flat coefficient index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    Scaling {
        position: usize,
    },
    /// `position` is `k` in 1D; in 2D it is `band·4^j + row·2^j + col`
    /// with bands ordered (horizontal, vertical, diagonal).
    Detail {
        level: u32,
        position: usize,
    },
}

/// Index map shared by the 1D and 2D coefficient arrays.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub grid: Grid,
    pub primary_level: u32,
}

impl Layout {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    fn coarse_side(&self) -> usize {
        1 << self.primary_level
    }

    #[inline]
    pub fn is_scaling(&self, flat: usize) -> bool {
        let s = self.coarse_side();
        match self.grid {
            Grid::Line(_) => flat < s,
            Grid::Square(n) => flat / n < s && flat % n < s,
        }
    }

    pub fn slot(&self, flat: usize) -> Slot {
        if self.is_scaling(flat) {
            let position = match self.grid {
                Grid::Line(_) => flat,
                Grid::Square(n) => (flat / n) * self.coarse_side() + flat % n,
            };
            return Slot::Scaling { position };
        }
        match self.grid {
            Grid::Line(_) => {
                let level = usize::BITS - 1 - flat.leading_zeros();
                Slot::Detail {
                    level,
                    position: flat - (1 << level),
                }
            }
            Grid::Square(n) => {
                let (r, c) = (flat / n, flat % n);
                let m = r.max(c);
                let level = usize::BITS - 1 - m.leading_zeros();
                let s = 1usize << level;
                let band = match (r >= s, c >= s) {
                    (false, true) => 0,
                    (true, false) => 1,
                    _ => 2,
                };
                Slot::Detail {
                    level,
                    position: band * s * s + (r % s) * s + (c % s),
                }
            }
        }
    }

    /// Flat indices of the finest detail coefficients used for noise
    /// estimation: the upper half in 1D, the finest diagonal band in 2D.
    pub fn finest_indices(&self) -> Vec<usize> {
        match self.grid {
            Grid::Line(n) => (n / 2..n).collect(),
            Grid::Square(n) => {
                let h = n / 2;
                (h..n)
                    .flat_map(|r| (h..n).map(move |c| r * n + c))
                    .collect()
            }
        }
    }
}

/// Wavelet coefficients plus the layout that produced them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientArray {
    pub values: Vec<f64>,
    pub layout: Layout,
}

impl CoefficientArray {
    pub fn new(values: Vec<f64>, layout: Layout) -> Result<Self> {
        if values.len() != layout.len() {
            return Err(Error::LengthMismatch {
                expected: layout.len(),
                actual: values.len(),
            });
        }
        Ok(Self { values, layout })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn finest_details(&self) -> impl Iterator<Item = f64> + '_ {
        self.layout
            .finest_indices()
            .into_iter()
            .map(move |i| self.values[i])
    }

    /// Applies `f` to every detail coefficient, leaving scaling
    /// coefficients untouched.
    pub fn map_details(&self, mut f: impl FnMut(usize, f64) -> f64) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                if self.layout.is_scaling(i) {
                    w
                } else {
                    f(i, w)
                }
            })
            .collect();
        Self {
            values,
            layout: self.layout,
        }
    }
}

/// A validated wavelet transform for one grid shape.
#[derive(Clone, Debug)]
pub struct Transform {
    spec: WaveletSpec,
    layout: Layout,
    lo: &'static [f64],
    hi: Vec<f64>,
}

impl Transform {
    pub fn new(spec: WaveletSpec, grid: Grid) -> Result<Self> {
        grid.validate(spec.primary_level)?;
        let lo = spec.lowpass()?;
        let k = lo.len();
        let hi = (0..k)
            .map(|n| {
                let v = lo[k - 1 - n];
                if n % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .collect();
        Ok(Self {
            spec,
            layout: Layout {
                grid,
                primary_level: spec.primary_level,
            },
            lo,
            hi,
        })
    }

    pub fn spec(&self) -> &WaveletSpec {
        &self.spec
    }

    pub fn grid(&self) -> Grid {
        self.layout.grid
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn len(&self) -> usize {
        self.layout.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layout.is_empty()
    }

    pub fn forward(&self, signal: &[f64]) -> Result<CoefficientArray> {
        self.check_len(signal.len())?;
        let mut values = signal.to_vec();
        self.forward_in_place(&mut values);
        Ok(CoefficientArray {
            values,
            layout: self.layout,
        })
    }

    pub fn inverse(&self, coeffs: &CoefficientArray) -> Result<Vec<f64>> {
        if coeffs.layout != self.layout {
            return Err(Error::LayoutMismatch);
        }
        self.check_len(coeffs.values.len())?;
        let mut values = coeffs.values.clone();
        self.inverse_in_place(&mut values);
        Ok(values)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: len,
            });
        }
        Ok(())
    }

    pub(crate) fn forward_in_place(&self, data: &mut [f64]) {
        let side = self.layout.grid.side();
        let stop = 1usize << self.spec.primary_level;
        let mut tmp = vec![0.0; side];
        let mut len = side;
        match self.layout.grid {
            Grid::Line(_) => {
                while len > stop {
                    self.analyze(&data[..len], &mut tmp[..len]);
                    data[..len].copy_from_slice(&tmp[..len]);
                    len /= 2;
                }
            }
            Grid::Square(n) => {
                let mut col = vec![0.0; side];
                while len > stop {
                    for r in 0..len {
                        let row = &mut data[r * n..r * n + len];
                        self.analyze(row, &mut tmp[..len]);
                        row.copy_from_slice(&tmp[..len]);
                    }
                    for c in 0..len {
                        for r in 0..len {
                            col[r] = data[r * n + c];
                        }
                        self.analyze(&col[..len], &mut tmp[..len]);
                        for r in 0..len {
                            data[r * n + c] = tmp[r];
                        }
                    }
                    len /= 2;
                }
            }
        }
    }

    pub(crate) fn inverse_in_place(&self, data: &mut [f64]) {
        let side = self.layout.grid.side();
        let mut tmp = vec![0.0; side];
        let mut len = 2usize << self.spec.primary_level;
        match self.layout.grid {
            Grid::Line(_) => {
                while len <= side {
                    self.synthesize(&data[..len], &mut tmp[..len]);
                    data[..len].copy_from_slice(&tmp[..len]);
                    len *= 2;
                }
            }
            Grid::Square(n) => {
                let mut col = vec![0.0; side];
                while len <= side {
                    for c in 0..len {
                        for r in 0..len {
                            col[r] = data[r * n + c];
                        }
                        self.synthesize(&col[..len], &mut tmp[..len]);
                        for r in 0..len {
                            data[r * n + c] = tmp[r];
                        }
                    }
                    for r in 0..len {
                        let row = &mut data[r * n..r * n + len];
                        self.synthesize(row, &mut tmp[..len]);
                        row.copy_from_slice(&tmp[..len]);
                    }
                    len *= 2;
                }
            }
        }
    }

    /// One periodic analysis step: `input` (length `L`) to
    /// `[approximation | detail]` in `out`.
    fn analyze(&self, input: &[f64], out: &mut [f64]) {
        let len = input.len();
        let half = len / 2;
        let mask = len - 1;
        for k in 0..half {
            let mut a = 0.0;
            let mut d = 0.0;
            for (n, (&h, &g)) in self.lo.iter().zip(&self.hi).enumerate() {
                let x = input[(2 * k + n) & mask];
                a += h * x;
                d += g * x;
            }
            out[k] = a;
            out[half + k] = d;
        }
    }

    fn synthesize(&self, input: &[f64], out: &mut [f64]) {
        let len = input.len();
        let half = len / 2;
        let mask = len - 1;
        out.fill(0.0);
        for k in 0..half {
            let a = input[k];
            let d = input[half + k];
            for (n, (&h, &g)) in self.lo.iter().zip(&self.hi).enumerate() {
                out[(2 * k + n) & mask] += h * a + g * d;
            }
        }
    }
}

/// Forward 1D transform of a dyadic-length signal.
pub fn dwt_1d(signal: &[f64], spec: WaveletSpec) -> Result<CoefficientArray> {
    Transform::new(spec, Grid::Line(signal.len()))?.forward(signal)
}

pub fn idwt_1d(coeffs: &CoefficientArray, spec: WaveletSpec) -> Result<Vec<f64>> {
    if !matches!(coeffs.layout.grid, Grid::Line(_)) {
        return Err(Error::LayoutMismatch);
    }
    Transform::new(spec, coeffs.layout.grid)?.inverse(coeffs)
}

/// Forward separable 2D transform of a row-major `side×side` image.
pub fn dwt_2d(image: &[f64], side: usize, spec: WaveletSpec) -> Result<CoefficientArray> {
    if image.len() != side * side {
        return Err(Error::LengthMismatch {
            expected: side * side,
            actual: image.len(),
        });
    }
    Transform::new(spec, Grid::Square(side))?.forward(image)
}

pub fn idwt_2d(coeffs: &CoefficientArray, spec: WaveletSpec) -> Result<Vec<f64>> {
    if !matches!(coeffs.layout.grid, Grid::Square(_)) {
        return Err(Error::LayoutMismatch);
    }
    Transform::new(spec, coeffs.layout.grid)?.inverse(coeffs)
}
