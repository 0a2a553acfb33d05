// SPDX-License-Identifier: MIT OR Apache-2.0

//! Independent oracles shared by the integration tests.

#![allow(dead_code, clippy::excessive_precision)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) quadrature on a finite interval.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol || depth == 0 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, 0.5 * tol, depth - 1) + rec(f, m, b, 0.5 * tol, depth - 1)
    }
    if b <= a {
        return 0.0;
    }
    rec(f, a, b, tol, 40)
}

/// `E[1(|W| ≥ c) h(W)]` for `W ~ N(w, τ²)` by quadrature over the two tails,
/// truncated 40 standard deviations out.
pub fn tail_expectation(h: &dyn Fn(f64) -> f64, w: f64, tau: f64, c: f64) -> f64 {
    let dens = |x: f64| {
        let z = (x - w) / tau;
        (-0.5 * z * z).exp() / (tau * (2.0 * std::f64::consts::PI).sqrt())
    };
    let g = |x: f64| h(x) * dens(x);
    let lo = w - 40.0 * tau;
    let hi = w + 40.0 * tau;
    // split at the mode so the peak never hides between nodes
    let upper = if w > c {
        integrate(&g, c, w, 1e-14) + integrate(&g, w, hi, 1e-14)
    } else {
        integrate(&g, c, hi, 1e-14)
    };
    let lower = if w < -c {
        integrate(&g, lo, w, 1e-14) + integrate(&g, w, -c, 1e-14)
    } else {
        integrate(&g, lo, -c, 1e-14)
    };
    upper + lower
}

pub fn hard_oracle(w: f64, eta_sq: f64, sigma: f64, c: f64) -> f64 {
    tail_expectation(&|x| x, w, eta_sq.sqrt() * sigma, c)
}

pub fn soft_oracle(w: f64, eta_sq: f64, sigma: f64, c: f64) -> f64 {
    tail_expectation(
        &|x: f64| x.signum() * (x.abs() - c),
        w,
        eta_sq.sqrt() * sigma,
        c,
    )
}

/// Dense orthonormal periodic DWT matrix (rows are coefficients in pyramid
/// order `[a_p | d_p | … | d_{J-1}]`), built from explicit per-level
/// filter matrices.
pub fn dense_dwt_matrix(h: &[f64], n: usize, primary_level: u32) -> Vec<Vec<f64>> {
    let k = h.len();
    let g: Vec<f64> = (0..k)
        .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 } * h[k - 1 - i])
        .collect();
    let mut out = vec![vec![0.0; n]; n];
    let mut approx: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut len = n;
    let coarse = 1usize << primary_level;
    while len > coarse {
        let half = len / 2;
        let mut next = vec![vec![0.0; n]; half];
        for r in 0..half {
            for t in 0..k {
                let src = (2 * r + t) % len;
                for col in 0..n {
                    next[r][col] += h[t] * approx[src][col];
                    out[half + r][col] += g[t] * approx[src][col];
                }
            }
        }
        approx = next;
        len = half;
    }
    for (r, row) in approx.into_iter().enumerate() {
        out[r] = row;
    }
    out
}

/// `diag(I − W R Wᵀ)` with `R` the observed-point selector.
pub fn dense_eta_sq(w: &[Vec<f64>], mask: &[bool]) -> Vec<f64> {
    w.iter()
        .map(|row| {
            1.0 - row
                .iter()
                .zip(mask)
                .filter(|(_, &m)| m)
                .map(|(v, _)| v * v)
                .sum::<f64>()
        })
        .collect()
}

pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

pub fn mse(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / a.len() as f64
}
