use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

const MAX_GOLDEN_ITERS: usize = 500;
const MAX_DESCENT_ITERS: usize = 100_000;
/// 1/φ
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Closed search interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        let b = Self { lo, hi };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite()) {
            return Err(domain(format!(
                "bracket [{}, {}] is not finite",
                self.lo, self.hi
            )));
        }
        if self.lo >= self.hi {
            return Err(domain(format!(
                "bracket [{}, {}] is empty",
                self.lo, self.hi
            )));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    /// `n` equally spaced points from `lo` to `hi` inclusive.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        if n == 1 {
            return vec![self.lo];
        }
        let step = self.width() / (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.hi
                } else {
                    self.lo + i as f64 * step
                }
            })
            .collect()
    }
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Golden-section search for a minimizer of `f` on `bracket`.
///
/// Unimodality is not checked. Stops once the bracket is narrower than `tol`
/// and returns the best interior point evaluated, as `(argmin, min)`.
/// NaN objective values are treated as +∞.
pub fn minimize_scalar<F>(f: F, bracket: Bracket, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    bracket.validate()?;
    if !(tol > 0.0) {
        return Err(domain(format!(
            "minimize_scalar: tolerance must be positive, got {tol}"
        )));
    }
    let f = |x: f64| sanitize(f(x));
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..MAX_GOLDEN_ITERS {
        if b - a <= tol {
            return Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) });
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    Err(Error::NonConvergence(format!(
        "golden section did not reach width {tol} within {MAX_GOLDEN_ITERS} iterations"
    )))
}

/// Coarse grid scan followed by compass-style coordinate descent.
///
/// The `coarse_n × coarse_n` grid spans the box including its edges and is
/// evaluated in parallel; the best point (first in x-major order on ties)
/// seeds the descent. The descent tries ±step along each axis, moves to the
/// best strict improvement, and halves both steps when none exists; it stops
/// once both steps are below `tol`. Returns `((x, y), min)`.
pub fn minimize_2d<F>(
    f: F,
    bounds: (Bracket, Bracket),
    coarse_n: usize,
    tol: f64,
) -> Result<((f64, f64), f64)>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let (bx, by) = bounds;
    bx.validate()?;
    by.validate()?;
    if coarse_n < 2 {
        return Err(domain(format!(
            "minimize_2d: coarse_n must be at least 2, got {coarse_n}"
        )));
    }
    if !(tol > 0.0) {
        return Err(domain(format!(
            "minimize_2d: tolerance must be positive, got {tol}"
        )));
    }
    let f = |x: f64, y: f64| sanitize(f(x, y));
    let xs = bx.grid(coarse_n);
    let ys = by.grid(coarse_n);
    let values: Vec<f64> = (0..coarse_n * coarse_n)
        .into_par_iter()
        .map(|k| f(xs[k / coarse_n], ys[k % coarse_n]))
        .collect();
    let mut best_k = 0;
    for (k, v) in values.iter().enumerate() {
        if *v < values[best_k] {
            best_k = k;
        }
    }
    let (mut x, mut y) = (xs[best_k / coarse_n], ys[best_k % coarse_n]);
    let mut fbest = values[best_k];

    let mut hx = bx.width() / (coarse_n - 1) as f64;
    let mut hy = by.width() / (coarse_n - 1) as f64;
    for _ in 0..MAX_DESCENT_ITERS {
        if hx < tol && hy < tol {
            return Ok(((x, y), fbest));
        }
        let candidates = [
            (bx.clamp(x - hx), y),
            (bx.clamp(x + hx), y),
            (x, by.clamp(y - hy)),
            (x, by.clamp(y + hy)),
        ];
        let mut moved = None;
        let mut fmove = fbest;
        for (cx, cy) in candidates {
            if cx == x && cy == y {
                continue;
            }
            let v = f(cx, cy);
            if v < fmove {
                fmove = v;
                moved = Some((cx, cy));
            }
        }
        match moved {
            Some((cx, cy)) => {
                x = cx;
                y = cy;
                fbest = fmove;
            }
            None => {
                hx *= 0.5;
                hy *= 0.5;
            }
        }
    }
    Err(Error::NonConvergence(format!(
        "coordinate descent did not settle within {MAX_DESCENT_ITERS} iterations"
    )))
}
