//! Trapping time and quantum-speed-limit ratio τ_QSL/t_c.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::dephasing::{state_with_coherence, DephasingModel, ModelParams, QubitState};
use crate::error::{domain, Error, Result};
use crate::mathcore::{integrate, QuadratureSpec};

/// Tolerance band and search grid used to locate the trapping time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrappingSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Search horizon in units of 1/ω_c.
    pub t_max: f64,
    pub grid_n: usize,
}

impl Default for TrappingSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-3,
            abs_tol: 1e-6,
            t_max: 50.0,
            grid_n: 5000,
        }
    }
}

impl TrappingSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("t_max", self.t_max),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(domain(format!("trapping {name} must be positive, got {v}")));
            }
        }
        if self.grid_n < 100 {
            return Err(domain(format!(
                "trapping grid_n must be at least 100, got {}",
                self.grid_n
            )));
        }
        Ok(())
    }
}

/// Which numerator the QSL ratio uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QslMode {
    /// |Υ(0)·[Υ(t_c) − Υ(0)]|, the modulus of the complex product.
    #[default]
    PaperLiteral,
    /// 2·B(ρ₀, ρ_{t_c}) with the relative-purity metric B.
    RelativePurity,
}

impl QslMode {
    pub const ALL: [QslMode; 2] = [QslMode::PaperLiteral, QslMode::RelativePurity];

    pub fn as_str(&self) -> &'static str {
        match self {
            QslMode::PaperLiteral => "paper_literal",
            QslMode::RelativePurity => "relative_purity",
        }
    }
}

impl fmt::Display for QslMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QslMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" | "paper_literal" => Ok(QslMode::PaperLiteral),
            "purity" | "relative_purity" => Ok(QslMode::RelativePurity),
            other => Err(Error::Argument(format!(
                "unknown QSL mode '{other}' (expected paper|purity)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QslResult {
    pub t_c: f64,
    pub ratio: f64,
    pub numerator: f64,
    /// ∫₀^{t_c} |dΥ/dt| dt.
    pub denominator: f64,
    pub mode: QslMode,
}

/// Quadrature settings for the path length ∫|Υ̇|dt.
pub const QSL_QUADRATURE: QuadratureSpec = QuadratureSpec {
    abs_tol: 1e-10,
    max_depth: 40,
};

/// Smallest grid time after which |Υ| stays within
/// `abs_tol + rel_tol·|Υ_∞|` of its stationary value up to the horizon.
///
/// Only super-Ohmic baths (μ > 0) trap coherence. Returns 0 when the band
/// already holds at t = 0.
pub fn trapping_time(params: &ModelParams, spec: &TrappingSpec) -> Result<f64> {
    let model = DephasingModel::new(params)?;
    trapping_time_of(&model, spec)
}

pub(crate) fn trapping_time_of(model: &DephasingModel, spec: &TrappingSpec) -> Result<f64> {
    spec.validate()?;
    let mu = model.params().bath.mu;
    if mu <= 0.0 {
        return Err(Error::NoTrapping(format!("mu = {mu} is not super-Ohmic")));
    }
    let s_inf = model.stationary_magnitude();
    let band = spec.abs_tol + spec.rel_tol * s_inf;
    let horizon = spec.t_max / model.params().bath.omega_c;
    let n = spec.grid_n;
    let time = |i: usize| horizon * i as f64 / (n - 1) as f64;
    for i in (0..n).rev() {
        let m = model.magnitude(time(i))?;
        if !((m - s_inf).abs() <= band) {
            if i == n - 1 {
                return Err(Error::NonConvergence(format!(
                    "|Y| = {m} still outside the band around {s_inf} at the horizon t = {horizon}"
                )));
            }
            return Ok(time(i + 1));
        }
    }
    Ok(0.0)
}

/// |tr(ρ₀ρ_τ) − tr(ρ₀²)|.
pub fn relative_purity_metric(rho0: &QubitState, rho_tau: &QubitState) -> f64 {
    (trace_product(rho0, rho_tau) - trace_product(rho0, rho0)).abs()
}

fn trace_product(a: &QubitState, b: &QubitState) -> f64 {
    a.rho_ee * b.rho_ee + a.rho_gg * b.rho_gg + 2.0 * (a.rho_eg * b.rho_eg.conj()).re
}

/// ∫₀^{t_end} |dΥ/dt| dt, integrated panel by panel (unit width in 1/ω_c).
pub fn path_length(model: &DephasingModel, t_end: f64, quad: &QuadratureSpec) -> Result<f64> {
    let wc = model.params().bath.omega_c;
    let panels = (t_end * wc).ceil().max(1.0) as usize;
    let per_panel = QuadratureSpec {
        abs_tol: quad.abs_tol / panels as f64,
        ..*quad
    };
    let width = t_end / panels as f64;
    let integrand = |t: f64| model.derivative(t).map(|d| d.norm()).unwrap_or(f64::NAN);
    let mut total = 0.0;
    for p in 0..panels {
        let a = p as f64 * width;
        let b = if p + 1 == panels { t_end } else { a + width };
        total += integrate(integrand, a, b, &per_panel)?;
    }
    Ok(total)
}

/// τ_QSL/t_c for the evolution from ρ(0) to the trapped state ρ(t_c).
///
/// Requires equal populations |c_e|² = |c_g|² = ½. With the singular values
/// of dρ/dt both equal to |Υ̇|/2, the operator-norm bound reduces to
/// 2B/∫|Υ̇|dt; [`QslMode::PaperLiteral`] replaces 2B by |Υ(0)[Υ(t_c)−Υ(0)]|.
pub fn qsl_ratio(params: &ModelParams, spec: &TrappingSpec, mode: QslMode) -> Result<QslResult> {
    qsl_ratio_with(params, spec, mode, &QSL_QUADRATURE)
}

pub fn qsl_ratio_with(
    params: &ModelParams,
    spec: &TrappingSpec,
    mode: QslMode,
    quad: &QuadratureSpec,
) -> Result<QslResult> {
    if !params.qubit.has_equal_populations() {
        return Err(domain("QSL ratio needs |ce|^2 = |cg|^2 = 1/2"));
    }
    let model = DephasingModel::new(params)?;
    let t_c = trapping_time_of(&model, spec)?;
    if t_c == 0.0 {
        return Err(Error::ZeroDenominator(
            "coherence is already trapped at t = 0; path length vanishes".into(),
        ));
    }
    let ups0 = model.factor(0.0)?;
    let ups_c = model.factor(t_c)?;
    let denominator = path_length(&model, t_c, quad)?;
    assemble(&model, mode, t_c, ups0, ups_c, denominator)
}

fn assemble(
    model: &DephasingModel,
    mode: QslMode,
    t_c: f64,
    ups0: Complex64,
    ups_c: Complex64,
    denominator: f64,
) -> Result<QslResult> {
    let numerator = match mode {
        QslMode::PaperLiteral => (ups0 * (ups_c - ups0)).norm(),
        QslMode::RelativePurity => {
            let q = &model.params().qubit;
            let rho0 = state_with_coherence(q, ups0);
            let rho_c = state_with_coherence(q, ups_c);
            2.0 * relative_purity_metric(&rho0, &rho_c)
        }
    };
    if !(denominator > 0.0 && denominator.is_finite()) {
        return Err(Error::ZeroDenominator(format!(
            "path length {denominator} on [0, {t_c}]"
        )));
    }
    Ok(QslResult {
        t_c,
        ratio: numerator / denominator,
        numerator,
        denominator,
        mode,
    })
}
