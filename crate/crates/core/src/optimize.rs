// Copyright 2026 The dfsgate Authors
// SPDX-License-Identifier: Apache-2.0

//! One-dimensional minimization: coarse grid followed by golden-section
//! refinement.

use crate::error::Result;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
    /// The best coarse-grid point was an end point of the search interval.
    pub at_boundary: bool,
}

/// Golden-section search on `[a, b]` until the bracket is shorter than `tol`.
pub fn golden_section<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<Minimum>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut evals = 2;
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
        evals += 1;
    }
    let (x, value) = if fc <= fd { (c, fc) } else { (d, fd) };
    Ok(Minimum {
        x,
        value,
        evaluations: evals,
        at_boundary: false,
    })
}

/// Minimize `f` over `[lo, hi]` (both positive) using `points` log-spaced
/// grid values, then golden-section refinement in `log x` around the best
/// grid point to relative tolerance `rel_tol`.
pub fn minimize_log<F>(mut f: F, lo: f64, hi: f64, points: usize, rel_tol: f64) -> Result<Minimum>
where
    F: FnMut(f64) -> Result<f64>,
{
    assert!(
        lo > 0.0 && hi > lo && points >= 3,
        "invalid search interval"
    );
    let (la, lb) = (lo.ln(), hi.ln());
    let grid: Vec<f64> = (0..points)
        .map(|k| la + (lb - la) * k as f64 / (points - 1) as f64)
        .collect();
    let mut values = Vec::with_capacity(points);
    for &lx in &grid {
        values.push(f(lx.exp())?);
    }
    let mut best = 0;
    for (k, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = k;
        }
    }
    let at_boundary = best == 0 || best == points - 1;
    let left = grid[best.saturating_sub(1)];
    let right = grid[(best + 1).min(points - 1)];
    let refined = golden_section(|lx| f(lx.exp()), left, right, (1.0 + rel_tol).ln())?;
    let (x, value) = if refined.value <= values[best] {
        (refined.x.exp(), refined.value)
    } else {
        (grid[best].exp(), values[best])
    };
    Ok(Minimum {
        x,
        value,
        evaluations: points + refined.evaluations,
        at_boundary,
    })
}

/// Least-squares line `y = a x + b`; returns `(a, b)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let a = sxy / sxx;
    (a, my - a * mx)
}
