use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Tolerance and recursion budget for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            max_depth: 40,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(domain(format!(
                "quadrature abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if self.max_depth < 1 {
            return Err(domain("quadrature max_depth must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

/// Adaptive Simpson estimate of ∫ₐᵇ f(t) dt to within `spec.abs_tol`.
///
/// The tolerance is split in half at every bisection; a panel is accepted
/// once its two-halves estimate agrees with the whole-panel estimate to
/// 15·tol, and the Richardson-corrected value is returned. Running out of
/// depth on any panel is reported as non-convergence.
pub fn integrate<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(domain(format!("integrate: non-finite limits [{a}, {b}]")));
    }
    if a > b {
        return Err(domain(format!(
            "integrate: lower limit {a} exceeds upper limit {b}"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    let panel = Panel {
        a,
        b,
        fa,
        fm,
        fb,
        whole,
    };
    refine(&f, panel, spec.abs_tol, spec.max_depth)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn refine<F>(f: &F, p: Panel, tol: f64, depth: u32) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (p.a + p.b);
    let lm = 0.5 * (p.a + m);
    let rm = 0.5 * (m + p.b);
    let (flm, frm) = (f(lm), f(rm));
    if !(flm.is_finite() && frm.is_finite()) {
        return Err(Error::NonConvergence(format!(
            "integrand is not finite near t = {m}"
        )));
    }
    let left = simpson(p.a, m, p.fa, flm, p.fm);
    let right = simpson(m, p.b, p.fm, frm, p.fb);
    let delta = left + right - p.whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 || lm <= p.a || rm >= p.b {
        return Err(Error::NonConvergence(format!(
            "adaptive Simpson exhausted its depth on [{}, {}] (error estimate {:e})",
            p.a,
            p.b,
            delta.abs() / 15.0
        )));
    }
    let l = Panel {
        a: p.a,
        b: m,
        fa: p.fa,
        fm: flm,
        fb: p.fm,
        whole: left,
    };
    let r = Panel {
        a: m,
        b: p.b,
        fa: p.fm,
        fm: frm,
        fb: p.fb,
        whole: right,
    };
    Ok(refine(f, l, 0.5 * tol, depth - 1)? + refine(f, r, 0.5 * tol, depth - 1)?)
}
