//! Parameter sweeps, ECT-boundary extraction and optimizations behind the
//! stationary-coherence and QSL figures.
//!
//! Grid points are evaluated in parallel with rayon and reassembled in index
//! order, so tables are identical regardless of the thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::coherence::stationary_coherence_of;
use crate::dephasing::{DephasingModel, ModelParams};
use crate::error::{domain, Error, Result};
use crate::mathcore::{minimize_2d, minimize_scalar, Bracket, QuadratureSpec};
use crate::qsl::{qsl_ratio, QslMode, TrappingSpec, QSL_QUADRATURE};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Upper end of the υ scan used for ECT crossings.
pub const ECT_UPSILON_MAX: f64 = 6.0;
pub const ECT_SCAN_N: usize = 1200;
pub const ECT_BISECT_TOL: f64 = 1e-4;

const QSL_COARSE_N: usize = 50;
const QSL_REFINE_TOL: f64 = 1e-4;
const STATIONARY_COARSE_N: usize = 41;

/// Trapping search used for the QSL figure datasets. The grid spacing matches
/// the default; the longer horizon lets μ ≈ 1.5 baths (deficit ~ t^{-μ}) settle.
pub const FIGURE_QSL_TRAPPING: TrappingSpec = TrappingSpec {
    rel_tol: 1e-3,
    abs_tol: 1e-6,
    t_max: 200.0,
    grid_n: 19_997,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisName {
    Alpha,
    Mu,
    Lambda,
    Upsilon,
    Omega0,
    T,
}

impl AxisName {
    pub fn as_str(&self) -> &'static str {
        match self {
            AxisName::Alpha => "alpha",
            AxisName::Mu => "mu",
            AxisName::Lambda => "lambda",
            AxisName::Upsilon => "upsilon",
            AxisName::Omega0 => "omega0",
            AxisName::T => "t",
        }
    }

    fn check_value(&self, v: f64) -> Result<()> {
        let ok = v.is_finite()
            && match self {
                AxisName::Alpha => v > 0.0,
                AxisName::Mu => v > -1.0,
                AxisName::Lambda => (0.0..=1.0).contains(&v),
                AxisName::Upsilon => v > 0.0,
                AxisName::Omega0 | AxisName::T => v >= 0.0,
            };
        if ok {
            Ok(())
        } else {
            Err(domain(format!(
                "{} = {v} is outside the parameter domain",
                self.as_str()
            )))
        }
    }
}

impl fmt::Display for AxisName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AxisName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "alpha" => AxisName::Alpha,
            "mu" => AxisName::Mu,
            "lambda" => AxisName::Lambda,
            "upsilon" => AxisName::Upsilon,
            "omega0" | "w0" => AxisName::Omega0,
            "t" => AxisName::T,
            other => return Err(Error::Argument(format!("unknown axis '{other}'"))),
        })
    }
}

/// One sweep axis: `n` equally spaced values on `[lo, hi]`, or an explicit
/// list of values when `points` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub name: AxisName,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<f64>>,
}

impl AxisSpec {
    pub fn linear(name: AxisName, lo: f64, hi: f64, n: usize) -> Result<Self> {
        let a = Self {
            name,
            lo,
            hi,
            n,
            points: None,
        };
        a.validate()?;
        Ok(a)
    }

    /// Axis over the given values, in the given order.
    pub fn explicit(name: AxisName, points: Vec<f64>) -> Result<Self> {
        let lo = points.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = points.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let a = Self {
            name,
            lo,
            hi,
            n: points.len(),
            points: Some(points),
        };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<()> {
        match &self.points {
            Some(p) => {
                if p.is_empty() || p.len() != self.n {
                    return Err(domain(format!(
                        "axis {} has an inconsistent point list",
                        self.name
                    )));
                }
                for v in p {
                    self.name.check_value(*v)?;
                }
            }
            None => {
                if !(self.lo < self.hi) {
                    return Err(domain(format!(
                        "axis {} needs lo < hi, got {}:{}",
                        self.name, self.lo, self.hi
                    )));
                }
                if self.n < 2 {
                    return Err(domain(format!(
                        "axis {} needs at least 2 points",
                        self.name
                    )));
                }
                self.name.check_value(self.lo)?;
                self.name.check_value(self.hi)?;
            }
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        match &self.points {
            Some(p) => p.clone(),
            None => Bracket {
                lo: self.lo,
                hi: self.hi,
            }
            .grid(self.n),
        }
    }

    fn apply(&self, params: &mut ModelParams, v: f64) {
        match self.name {
            AxisName::Alpha => params.bath.alpha = v,
            AxisName::Mu => params.bath.mu = v,
            AxisName::Lambda => params.corr.lambda = v,
            AxisName::Upsilon => params.corr.upsilon = v,
            AxisName::Omega0 => params.qubit.omega0 = v,
            AxisName::T => {}
        }
    }
}

impl FromStr for AxisSpec {
    type Err = Error;

    /// `name=lo:hi:n`
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Argument(format!("axis '{s}' is not of the form name=lo:hi:n"));
        let (name, range) = s.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = range.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        AxisSpec::linear(name.trim().parse()?, lo, hi, n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepOutput {
    Stationary,
    Qsl,
}

/// Everything besides the model that a sweep row depends on.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepSettings {
    pub trapping: TrappingSpec,
    pub qsl_mode: QslMode,
    /// When set, each row also reports `c_stationary − reference`.
    pub reference: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// Axis values, in axis order.
    pub coords: Vec<f64>,
    pub c_stationary: Option<f64>,
    pub l1_stationary: Option<f64>,
    pub c_excess: Option<f64>,
    pub t_c: Option<f64>,
    pub qsl_ratio: Option<f64>,
    pub error_code: Option<String>,
}

/// Reproducibility record written next to every table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepManifest {
    pub version: String,
    pub figure: Option<String>,
    pub base: ModelParams,
    pub settings: SweepSettings,
    pub quadrature: QuadratureSpec,
    pub axes: Vec<AxisSpec>,
    pub outputs: Vec<SweepOutput>,
    #[serde(default)]
    pub annotations: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axes: Vec<AxisSpec>,
    pub rows: Vec<SweepRow>,
    pub manifest: SweepManifest,
}

impl SweepResult {
    pub fn has_qsl(&self) -> bool {
        self.manifest.outputs.contains(&SweepOutput::Qsl)
    }

    pub fn has_excess(&self) -> bool {
        self.manifest.settings.reference.is_some()
    }
}

/// Evaluates the requested outputs on the Cartesian product of `axes`
/// (first axis outermost). Per-point failures land in `error_code`.
pub fn sweep(
    base: &ModelParams,
    axes: &[AxisSpec],
    outputs: &[SweepOutput],
    settings: &SweepSettings,
) -> Result<SweepResult> {
    if axes.is_empty() || axes.len() > 2 {
        return Err(Error::Argument(format!(
            "a sweep takes 1 or 2 axes, got {}",
            axes.len()
        )));
    }
    if outputs.is_empty() {
        return Err(Error::Argument("a sweep needs at least one output".into()));
    }
    for (i, a) in axes.iter().enumerate() {
        a.validate()?;
        if a.name == AxisName::T {
            return Err(Error::Argument(
                "time is not a sweepable axis for stationary/qsl outputs".into(),
            ));
        }
        if axes[..i].iter().any(|b| b.name == a.name) {
            return Err(Error::Argument(format!("axis {} given twice", a.name)));
        }
    }
    settings.trapping.validate()?;
    let want_qsl = outputs.contains(&SweepOutput::Qsl);

    let values: Vec<Vec<f64>> = axes.iter().map(AxisSpec::values).collect();
    let total: usize = values.iter().map(Vec::len).product();
    let rows: Vec<SweepRow> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut rem = idx;
            let mut coords = vec![0.0; axes.len()];
            for k in (0..axes.len()).rev() {
                let len = values[k].len();
                coords[k] = values[k][rem % len];
                rem /= len;
            }
            let mut p = *base;
            for (a, v) in axes.iter().zip(&coords) {
                a.apply(&mut p, *v);
            }
            evaluate_row(coords, &p, want_qsl, settings)
        })
        .collect();

    let mut out_list = vec![SweepOutput::Stationary];
    if want_qsl {
        out_list.push(SweepOutput::Qsl);
    }
    Ok(SweepResult {
        axes: axes.to_vec(),
        rows,
        manifest: SweepManifest {
            version: VERSION.to_string(),
            figure: None,
            base: *base,
            settings: *settings,
            quadrature: QSL_QUADRATURE,
            axes: axes.to_vec(),
            outputs: out_list,
            annotations: serde_json::Value::Null,
        },
    })
}

fn evaluate_row(
    coords: Vec<f64>,
    p: &ModelParams,
    want_qsl: bool,
    settings: &SweepSettings,
) -> SweepRow {
    let mut row = SweepRow {
        coords,
        c_stationary: None,
        l1_stationary: None,
        c_excess: None,
        t_c: None,
        qsl_ratio: None,
        error_code: None,
    };
    let model = match DephasingModel::new(p) {
        Ok(m) => m,
        Err(e) => {
            row.error_code = Some(e.code().to_string());
            return row;
        }
    };
    match stationary_coherence_of(&model) {
        Ok(c) => {
            row.c_stationary = Some(c.rel_entropy);
            row.l1_stationary = Some(c.l1);
            row.c_excess = settings.reference.map(|r| c.rel_entropy - r);
        }
        Err(e) => {
            row.error_code = Some(e.code().to_string());
            return row;
        }
    }
    if want_qsl {
        match qsl_ratio(p, &settings.trapping, settings.qsl_mode) {
            Ok(q) => {
                row.t_c = Some(q.t_c);
                row.qsl_ratio = Some(q.ratio);
            }
            Err(e) => row.error_code = Some(e.code().to_string()),
        }
    }
    row
}

fn stationary_rel_entropy(p: &ModelParams) -> Result<f64> {
    Ok(stationary_coherence_of(&DephasingModel::new(p)?)?.rel_entropy)
}

/// υ values where the stationary coherence at correlation λ crosses its
/// product-state value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EctCrossings {
    pub lambda: f64,
    pub upsilon_crossings: Vec<f64>,
    /// Total υ-length inside (0, ECT_UPSILON_MAX] where the correlated state
    /// traps strictly more coherence.
    pub enhanced_length: f64,
}

/// Scans υ ∈ (0, 6] on a fine grid for sign changes of
/// C_∞(λ, υ) − C_∞(λ = 0) and bisects each bracket to 1e-4.
///
/// `base` supplies α, μ, ω_c and the qubit; its λ and υ are overridden.
pub fn ect_boundary(base: &ModelParams, lambda_grid: &AxisSpec) -> Result<Vec<EctCrossings>> {
    if lambda_grid.name != AxisName::Lambda {
        return Err(Error::Argument(format!(
            "ECT boundary needs a lambda axis, got {}",
            lambda_grid.name
        )));
    }
    lambda_grid.validate()?;
    if base.bath.mu <= 0.0 {
        return Err(Error::NoTrapping(format!(
            "mu = {} is not super-Ohmic",
            base.bath.mu
        )));
    }
    let reference = stationary_rel_entropy(&base.with_lambda(0.0))?;
    let scan: Vec<f64> = (1..=ECT_SCAN_N)
        .map(|i| ECT_UPSILON_MAX * i as f64 / ECT_SCAN_N as f64)
        .collect();
    lambda_grid
        .values()
        .into_par_iter()
        .map(|lambda| {
            let excess = |ups: f64| -> Result<f64> {
                Ok(
                    stationary_rel_entropy(&base.with_lambda(lambda).with_upsilon(ups))?
                        - reference,
                )
            };
            let signs: Vec<bool> = scan
                .iter()
                .map(|u| excess(*u).map(|d| d > 0.0))
                .collect::<Result<_>>()?;
            let mut crossings = Vec::new();
            for i in 0..scan.len() - 1 {
                if signs[i] != signs[i + 1] {
                    let (mut lo, mut hi) = (scan[i], scan[i + 1]);
                    while hi - lo > ECT_BISECT_TOL {
                        let mid = 0.5 * (lo + hi);
                        if (excess(mid)? > 0.0) == signs[i] {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    crossings.push(0.5 * (lo + hi));
                }
            }
            let mut inside = signs[0];
            let mut start = 0.0;
            let mut enhanced_length = 0.0;
            for c in crossings
                .iter()
                .copied()
                .chain(std::iter::once(ECT_UPSILON_MAX))
            {
                if inside {
                    enhanced_length += c - start;
                }
                start = c;
                inside = !inside;
            }
            Ok(EctCrossings {
                lambda,
                upsilon_crossings: crossings,
                enhanced_length,
            })
        })
        .collect()
}

/// Maximizes the stationary coherence over μ: a coarse scan picks the best
/// grid cell, then golden section refines within its neighbours.
/// Returns `(μ*, C_∞(μ*))`.
pub fn optimize_stationary_mu(params: &ModelParams, bracket: Bracket) -> Result<(f64, f64)> {
    bracket.validate()?;
    if !(bracket.lo > 0.0 && bracket.hi <= 4.0) {
        return Err(domain(format!(
            "mu bracket [{}, {}] must lie within (0, 4]",
            bracket.lo, bracket.hi
        )));
    }
    let neg_c = |mu: f64| {
        stationary_rel_entropy(&params.with_mu(mu))
            .map(|c| -c)
            .unwrap_or(f64::NAN)
    };
    let (lo, hi) = coarse_neighbourhood(&neg_c, bracket, STATIONARY_COARSE_N)?;
    let (mu, v) = minimize_scalar(neg_c, Bracket::new(lo, hi)?, 1e-7)?;
    Ok((mu, -v))
}

/// Best grid point by objective value (first on ties) and the bracket
/// spanned by its neighbours.
fn coarse_neighbourhood<F>(f: &F, bracket: Bracket, n: usize) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64 + Sync,
{
    let xs = bracket.grid(n);
    let fs: Vec<f64> = xs.par_iter().map(|x| f(*x)).collect();
    let best = best_index(&fs).ok_or_else(|| {
        Error::NonConvergence("objective is not finite anywhere on the coarse grid".into())
    })?;
    let lo = xs[best.saturating_sub(1)];
    let hi = xs[(best + 1).min(n - 1)];
    Ok((lo, hi))
}

fn best_index(fs: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in fs.iter().enumerate() {
        if v.is_finite() && best.is_none_or(|b| *v < fs[b]) {
            best = Some(i);
        }
    }
    best
}

/// Variables searched by [`optimize_qsl`] and their bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QslSearch {
    Mu(Bracket),
    Upsilon(Bracket),
    Joint { upsilon: Bracket, mu: Bracket },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QslOptimum {
    pub search: QslSearch,
    pub mu: f64,
    pub upsilon: f64,
    pub ratio: f64,
    pub t_c: f64,
    /// Smallest ratio seen on the coarse grid.
    pub coarse_min: f64,
    pub omega0: f64,
    pub mode: QslMode,
    pub trapping: TrappingSpec,
}

/// Minimizes τ_QSL/t_c over μ, υ or both: a 50-point-per-axis coarse scan
/// followed by golden section (1-D) or coordinate descent (2-D). Points
/// without trapping count as +∞.
pub fn optimize_qsl(
    params: &ModelParams,
    search: QslSearch,
    trapping: &TrappingSpec,
    mode: QslMode,
) -> Result<QslOptimum> {
    trapping.validate()?;
    let ratio_at = |mu: f64, ups: f64| {
        qsl_ratio(&params.with_mu(mu).with_upsilon(ups), trapping, mode)
            .map(|q| q.ratio)
            .unwrap_or(f64::INFINITY)
    };
    let check_mu = |b: &Bracket| -> Result<()> {
        b.validate()?;
        if b.lo <= 0.0 {
            return Err(Error::NoTrapping(format!(
                "mu range starts at {} but trapping needs mu > 0",
                b.lo
            )));
        }
        Ok(())
    };
    let (mu, upsilon, coarse_min) = match search {
        QslSearch::Mu(b) => {
            check_mu(&b)?;
            let ups = params.corr.upsilon;
            let (x, c) = optimize_1d(|mu| ratio_at(mu, ups), b)?;
            (x, ups, c)
        }
        QslSearch::Upsilon(b) => {
            b.validate()?;
            let mu = params.bath.mu;
            let (x, c) = optimize_1d(|ups| ratio_at(mu, ups), b)?;
            (mu, x, c)
        }
        QslSearch::Joint { upsilon, mu } => {
            check_mu(&mu)?;
            upsilon.validate()?;
            let coarse = upsilon.grid(QSL_COARSE_N);
            let coarse_mu = mu.grid(QSL_COARSE_N);
            let ((u, m), _) = minimize_2d(
                |u, m| ratio_at(m, u),
                (upsilon, mu),
                QSL_COARSE_N,
                QSL_REFINE_TOL,
            )?;
            // coarse minimum recomputed only for reporting; minimize_2d already started from it
            let coarse_min = coarse
                .par_iter()
                .flat_map_iter(|u| coarse_mu.iter().map(move |m| (*u, *m)))
                .map(|(u, m)| ratio_at(m, u))
                .reduce(|| f64::INFINITY, f64::min);
            (m, u, coarse_min)
        }
    };
    let best = qsl_ratio(&params.with_mu(mu).with_upsilon(upsilon), trapping, mode).map_err(
        |e| match e {
            Error::NoTrapping(_) | Error::NonConvergence(_) | Error::ZeroDenominator(_) => {
                Error::NonConvergence(format!("no trapping anywhere in the search box ({e})"))
            }
            other => other,
        },
    )?;
    Ok(QslOptimum {
        search,
        mu,
        upsilon,
        ratio: best.ratio,
        t_c: best.t_c,
        coarse_min,
        omega0: params.qubit.omega0,
        mode,
        trapping: *trapping,
    })
}

/// Returns `(argmin, coarse minimum)`; the argmin is never worse than the best coarse point.
fn optimize_1d<F>(f: F, bracket: Bracket) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64 + Sync,
{
    let xs = bracket.grid(QSL_COARSE_N);
    let fs: Vec<f64> = xs.par_iter().map(|x| f(*x)).collect();
    let best = best_index(&fs)
        .ok_or_else(|| Error::NonConvergence("no trapping anywhere in the search box".into()))?;
    let lo = xs[best.saturating_sub(1)];
    let hi = xs[(best + 1).min(xs.len() - 1)];
    let (x, v) = minimize_scalar(&f, Bracket::new(lo, hi)?, QSL_REFINE_TOL)?;
    if v < fs[best] {
        Ok((x, fs[best]))
    } else {
        Ok((xs[best], fs[best]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig1a,
    Fig1b,
    Fig1c,
    Fig1d,
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig3c,
}

impl FigureId {
    pub const ALL: [FigureId; 9] = [
        FigureId::Fig1a,
        FigureId::Fig1b,
        FigureId::Fig1c,
        FigureId::Fig1d,
        FigureId::Fig2a,
        FigureId::Fig2b,
        FigureId::Fig3a,
        FigureId::Fig3b,
        FigureId::Fig3c,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FigureId::Fig1a => "fig1a",
            FigureId::Fig1b => "fig1b",
            FigureId::Fig1c => "fig1c",
            FigureId::Fig1d => "fig1d",
            FigureId::Fig2a => "fig2a",
            FigureId::Fig2b => "fig2b",
            FigureId::Fig3a => "fig3a",
            FigureId::Fig3b => "fig3b",
            FigureId::Fig3c => "fig3c",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::Argument(format!("unknown figure id '{s}'")))
    }
}

/// Grid sizes for figure datasets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FigureResolution {
    /// Points per axis of stationary-coherence heatmaps.
    pub heatmap: usize,
    /// Points per stationary-coherence line.
    pub line: usize,
    /// Points per axis of the QSL heatmap.
    pub qsl_heatmap: usize,
    /// Points per QSL line.
    pub qsl_line: usize,
}

impl Default for FigureResolution {
    fn default() -> Self {
        Self {
            heatmap: 200,
            line: 200,
            qsl_heatmap: 200,
            qsl_line: 100,
        }
    }
}

impl FigureResolution {
    /// Coarser grids used by the test suite.
    pub fn test() -> Self {
        Self {
            heatmap: 40,
            line: 40,
            qsl_heatmap: 12,
            qsl_line: 12,
        }
    }
}

fn figure_base(alpha: f64, mu: f64, lambda: f64, upsilon: f64) -> ModelParams {
    let mut p = ModelParams::default();
    p.bath.alpha = alpha;
    p.bath.mu = mu;
    p.corr.lambda = lambda;
    p.corr.upsilon = upsilon;
    p
}

/// Runs the canonical sweep for one figure with its fixed model parameters
/// (ω_c = 1, ω₀ = 0, c_e = c_g = 1/√2). Optima and ECT crossings go into the
/// manifest annotations.
pub fn figure_dataset(id: FigureId, res: &FigureResolution) -> Result<SweepResult> {
    use AxisName::*;
    let lin = AxisSpec::linear;
    let pts = AxisSpec::explicit;
    let stationary = [SweepOutput::Stationary];
    let with_qsl = [SweepOutput::Stationary, SweepOutput::Qsl];
    let trapping = FIGURE_QSL_TRAPPING;
    let mut settings = SweepSettings {
        trapping,
        ..SweepSettings::default()
    };

    let (base, axes, outputs): (ModelParams, Vec<AxisSpec>, &[SweepOutput]) = match id {
        FigureId::Fig1a | FigureId::Fig1b => {
            let lambda = if id == FigureId::Fig1a { 0.0 } else { 1.0 };
            (
                figure_base(0.2, 1.46, lambda, 1.5),
                vec![
                    lin(Mu, 0.1, 4.0, res.heatmap)?,
                    lin(Alpha, 0.01, 1.0, res.heatmap)?,
                ],
                &stationary,
            )
        }
        FigureId::Fig1c => (
            figure_base(0.2, 1.46, 0.0, 1.5),
            vec![
                pts(Lambda, vec![0.0, 0.3, 0.6, 1.0])?,
                lin(Mu, 0.05, 4.0, res.line)?,
            ],
            &stationary,
        ),
        FigureId::Fig1d => (
            figure_base(0.2, 1.46, 1.0, 1.5),
            vec![
                pts(Alpha, vec![0.05, 0.1, 0.2, 0.4, 0.8])?,
                lin(Mu, 0.05, 4.0, res.line)?,
            ],
            &stationary,
        ),
        FigureId::Fig2a | FigureId::Fig2b => {
            let base = figure_base(0.2, 1.46, 0.0, 1.5);
            settings.reference = Some(stationary_rel_entropy(&base)?);
            let axes = if id == FigureId::Fig2a {
                vec![
                    lin(Lambda, 0.0, 1.0, res.heatmap)?,
                    lin(Upsilon, 0.05, 6.0, res.heatmap)?,
                ]
            } else {
                vec![
                    pts(Lambda, vec![0.1, 0.3, 0.6, 0.9])?,
                    lin(Upsilon, 0.05, 6.0, res.line)?,
                ]
            };
            (base, axes, &stationary)
        }
        FigureId::Fig3a => (
            figure_base(0.2, 2.0, 0.0, 2.0),
            vec![
                pts(Lambda, vec![0.0, 0.3, 0.6, 0.9])?,
                lin(Mu, 0.5, 4.0, res.qsl_line)?,
            ],
            &with_qsl,
        ),
        FigureId::Fig3b => (
            figure_base(0.2, 1.46, 0.0, 2.0),
            vec![
                pts(Lambda, vec![0.1, 0.3, 0.6, 0.9])?,
                lin(Upsilon, 0.5, 5.0, res.qsl_line)?,
            ],
            &with_qsl,
        ),
        FigureId::Fig3c => (
            figure_base(0.2, 2.0, 0.5, 2.0),
            vec![
                lin(Upsilon, 0.5, 5.0, res.qsl_heatmap)?,
                lin(Mu, 0.5, 4.0, res.qsl_heatmap)?,
            ],
            &with_qsl,
        ),
    };

    let mut result = sweep(&base, &axes, outputs, &settings)?;
    result.manifest.figure = Some(id.as_str().to_string());
    result.manifest.annotations = figure_annotations(id, &base, &axes, &trapping)?;
    Ok(result)
}

fn figure_annotations(
    id: FigureId,
    base: &ModelParams,
    axes: &[AxisSpec],
    trapping: &TrappingSpec,
) -> Result<serde_json::Value> {
    use serde_json::json;
    let mode = QslMode::PaperLiteral;
    let series = axes[0].values();
    Ok(match id {
        FigureId::Fig1a | FigureId::Fig1b => serde_json::Value::Null,
        FigureId::Fig1c | FigureId::Fig1d => {
            let mut optima = Vec::new();
            for v in &series {
                let mut p = *base;
                axes[0].apply(&mut p, *v);
                let (mu, c) = optimize_stationary_mu(&p, Bracket::new(0.05, 4.0)?)?;
                optima.push(json!({ axes[0].name.as_str(): v, "mu_star": mu, "c_star": c }));
            }
            json!({ "stationary_optima": optima })
        }
        FigureId::Fig2a | FigureId::Fig2b => {
            let crossings = ect_boundary(base, &axes[0])?;
            json!({
                "reference_c_stationary": stationary_rel_entropy(&base.with_lambda(0.0))?,
                "ect_crossings": crossings,
            })
        }
        FigureId::Fig3a | FigureId::Fig3b => {
            let mut optima = Vec::new();
            for lambda in &series {
                let p = base.with_lambda(*lambda);
                let search = if id == FigureId::Fig3a {
                    QslSearch::Mu(Bracket::new(0.5, 4.0)?)
                } else {
                    QslSearch::Upsilon(Bracket::new(0.5, 5.0)?)
                };
                optima.push(json!({ "lambda": lambda, "optimum": optimize_qsl(&p, search, trapping, mode)? }));
            }
            json!({ "qsl_optima": optima })
        }
        FigureId::Fig3c => {
            let search = QslSearch::Joint {
                upsilon: Bracket::new(0.5, 5.0)?,
                mu: Bracket::new(0.5, 4.0)?,
            };
            json!({ "qsl_optimum": optimize_qsl(base, search, trapping, mode)? })
        }
    })
}
