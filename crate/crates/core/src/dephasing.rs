//! Closed-form dephasing factor Υ_λ(t) of the qubit and its reduced state.
//!
//! The bath couples through |g_ω|² = α ω^(μ+1) e^(−ω/ω_c). The initial bath
//! state attached to |g⟩ is a normalized superposition of the vacuum and a
//! coherent state with |f_ω|² = ω^(υ+1) e^(−ω/ω_c), weighted by λ. All times
//! are absolute; with the default ω_c = 1 they are in units of 1/ω_c.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{domain, Error, Result};
use crate::mathcore::gamma;

/// Below this |μ| the decay exponent switches to the Ohmic limit 2α ln(1 + ω_c²t²).
pub const OHMIC_THRESHOLD: f64 = 1e-4;

/// Slack allowed above |Υ| = 1 before a value is reported as unphysical.
pub const PHYSICALITY_SLACK: f64 = 1e-9;

const NORM_TOL: f64 = 1e-12;

/// Ohmic-like spectral density parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    /// Dimensionless coupling α > 0.
    pub alpha: f64,
    /// Ohmicity exponent μ > −1.
    pub mu: f64,
    /// Cutoff frequency ω_c > 0.
    pub omega_c: f64,
}

impl BathSpec {
    pub fn new(alpha: f64, mu: f64, omega_c: f64) -> Result<Self> {
        let b = Self { alpha, mu, omega_c };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(domain(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if !(self.mu > -1.0 && self.mu.is_finite()) {
            return Err(domain(format!("mu must exceed -1, got {}", self.mu)));
        }
        if !(self.omega_c > 0.0 && self.omega_c.is_finite()) {
            return Err(domain(format!(
                "omega_c must be positive, got {}",
                self.omega_c
            )));
        }
        Ok(())
    }

    pub fn is_ohmic(&self) -> bool {
        self.mu.abs() < OHMIC_THRESHOLD
    }
}

/// Parameters of the correlated initial bath state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSpec {
    /// Correlation weight λ ∈ [0, 1]; λ = 0 is the product state.
    pub lambda: f64,
    /// Exponent υ > 0 of the coherent-state amplitude |f_ω|².
    pub upsilon: f64,
}

impl CorrelationSpec {
    pub fn new(lambda: f64, upsilon: f64) -> Result<Self> {
        let c = Self { lambda, upsilon };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(domain(format!(
                "lambda must lie in [0, 1], got {}",
                self.lambda
            )));
        }
        if !(self.upsilon > 0.0 && self.upsilon.is_finite()) {
            return Err(domain(format!(
                "upsilon must be positive, got {}",
                self.upsilon
            )));
        }
        Ok(())
    }
}

/// Qubit splitting and superposition amplitudes of the initial state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitSpec {
    pub omega0: f64,
    pub ce: Complex64,
    pub cg: Complex64,
}

impl Default for QubitSpec {
    fn default() -> Self {
        Self::equal_weights(0.0)
    }
}

impl QubitSpec {
    /// c_e = c_g = 1/√2.
    pub fn equal_weights(omega0: f64) -> Self {
        let c = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self {
            omega0,
            ce: c,
            cg: c,
        }
    }

    pub fn new(omega0: f64, ce: Complex64, cg: Complex64) -> Result<Self> {
        let q = Self { omega0, ce, cg };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega0 >= 0.0 && self.omega0.is_finite()) {
            return Err(domain(format!(
                "omega0 must be non-negative, got {}",
                self.omega0
            )));
        }
        let n = self.ce.norm_sqr() + self.cg.norm_sqr();
        if !((n - 1.0).abs() <= NORM_TOL) {
            return Err(domain(format!("|ce|^2 + |cg|^2 must equal 1, got {n}")));
        }
        Ok(())
    }

    /// True when |c_e|² = |c_g|² = ½ up to rounding.
    pub fn has_equal_populations(&self) -> bool {
        (self.ce.norm_sqr() - 0.5).abs() <= NORM_TOL && (self.cg.norm_sqr() - 0.5).abs() <= NORM_TOL
    }
}

/// Full model: bath, initial correlation and qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub bath: BathSpec,
    pub corr: CorrelationSpec,
    pub qubit: QubitSpec,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            bath: BathSpec {
                alpha: 0.2,
                mu: 1.46,
                omega_c: 1.0,
            },
            corr: CorrelationSpec {
                lambda: 0.0,
                upsilon: 1.5,
            },
            qubit: QubitSpec::default(),
        }
    }
}

impl ModelParams {
    pub fn new(bath: BathSpec, corr: CorrelationSpec, qubit: QubitSpec) -> Result<Self> {
        let p = Self { bath, corr, qubit };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.bath.validate()?;
        self.corr.validate()?;
        self.qubit.validate()?;
        if self.corr.lambda > 0.0 && !(self.theta() > 0.0) {
            return Err(domain(format!(
                "(mu + upsilon)/2 must be positive when lambda > 0, got {}",
                self.theta()
            )));
        }
        Ok(())
    }

    /// ϑ = (μ + υ)/2.
    pub fn theta(&self) -> f64 {
        0.5 * (self.bath.mu + self.corr.upsilon)
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.corr.lambda = lambda;
        self
    }

    pub fn with_upsilon(mut self, upsilon: f64) -> Self {
        self.corr.upsilon = upsilon;
        self
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.bath.mu = mu;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.bath.alpha = alpha;
        self
    }

    pub fn with_omega0(mut self, omega0: f64) -> Self {
        self.qubit.omega0 = omega0;
        self
    }
}

/// Time-independent constants fixed by the initial state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitConstants {
    /// Re⟨ξ₀|ξ_f⟩ = exp(−½ Γ(υ) ω_c^υ).
    pub overlap_s: f64,
    /// Normalization C_λ of the correlated bath state.
    pub norm_c: f64,
    /// Υ_λ(0), real and in (0, 1].
    pub ups0: f64,
}

/// Υ_λ and dΥ_λ/dt at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DephasingSample {
    pub t: f64,
    pub ups: Complex64,
    pub dups: Complex64,
}

/// Reduced qubit density matrix; ρ_ge = conj(ρ_eg).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitState {
    pub rho_ee: f64,
    pub rho_gg: f64,
    pub rho_eg: Complex64,
}

impl QubitState {
    /// State with populations ½, ½ and the given coherence.
    pub fn balanced(rho_eg: Complex64) -> Self {
        Self {
            rho_ee: 0.5,
            rho_gg: 0.5,
            rho_eg,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho_ee >= 0.0 && self.rho_gg >= 0.0) {
            return Err(domain(format!(
                "negative population ({}, {})",
                self.rho_ee, self.rho_gg
            )));
        }
        if !((self.rho_ee + self.rho_gg - 1.0).abs() <= NORM_TOL) {
            return Err(domain(format!(
                "trace {} differs from 1",
                self.rho_ee + self.rho_gg
            )));
        }
        if !(self.rho_eg.norm_sqr() <= self.rho_ee * self.rho_gg + NORM_TOL) {
            return Err(domain(format!(
                "state is not positive: |rho_eg|^2 = {} > rho_ee rho_gg = {}",
                self.rho_eg.norm_sqr(),
                self.rho_ee * self.rho_gg
            )));
        }
        Ok(())
    }

    pub fn trace(&self) -> f64 {
        self.rho_ee + self.rho_gg
    }
}

/// 1 − cos(p·arctan x)·(1+x²)^(−p/2), written to avoid cancellation at small p·x.
fn brace(p: f64, x: f64) -> f64 {
    let a = p * x.atan();
    let b = -0.5 * p * (x * x).ln_1p();
    let s = (0.5 * a).sin();
    -b.exp_m1() + b.exp() * 2.0 * s * s
}

/// (1+x²)^(−(p/2+1)) · (sin(p u) + x cos(p u), cos(p u) − x sin(p u)) with u = arctan x.
fn rate_kernels(p: f64, x: f64) -> (f64, f64) {
    let (s, c) = (p * x.atan()).sin_cos();
    let w = (-(0.5 * p + 1.0) * (x * x).ln_1p()).exp();
    (w * (s + x * c), w * (c - x * s))
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(domain(format!(
            "time must be finite and non-negative, got {t}"
        )))
    }
}

/// r(t) and its derivative with the gamma prefactors evaluated once.
#[derive(Debug, Clone, Copy)]
struct DecayTerm {
    mu: f64,
    omega_c: f64,
    ohmic: bool,
    pref: f64,
    dpref: f64,
}

impl DecayTerm {
    fn new(bath: &BathSpec) -> Result<Self> {
        let (a, mu, wc) = (bath.alpha, bath.mu, bath.omega_c);
        let ohmic = bath.is_ohmic();
        let pref = if ohmic {
            2.0 * a
        } else {
            4.0 * a * gamma(mu)? * wc.powf(mu)
        };
        let mu_rate = if ohmic { 0.0 } else { mu };
        let dpref = 4.0 * a * gamma(mu_rate + 1.0)? * wc.powf(mu_rate + 1.0);
        Ok(Self {
            mu,
            omega_c: wc,
            ohmic,
            pref,
            dpref,
        })
    }

    fn value(&self, t: f64) -> Result<f64> {
        let x = self.omega_c * t;
        let r = if self.ohmic {
            self.pref * (x * x).ln_1p()
        } else {
            self.pref * brace(self.mu, x)
        };
        if r < -1e-12 * self.pref.abs().max(1.0) {
            return Err(domain(format!(
                "decay exponent became negative ({r}) at t = {t}"
            )));
        }
        Ok(r)
    }

    fn rate(&self, t: f64) -> f64 {
        let mu = if self.ohmic { 0.0 } else { self.mu };
        self.dpref * rate_kernels(mu, self.omega_c * t).0
    }
}

/// k(t), φ(t) and their derivatives.
#[derive(Debug, Clone, Copy)]
struct CorrTerm {
    theta: f64,
    omega_c: f64,
    k_pref: f64,
    k_offset: f64,
    phi_pref: f64,
    dk_pref: f64,
    dphi_pref: f64,
}

impl CorrTerm {
    fn new(bath: &BathSpec, corr: &CorrelationSpec) -> Result<Self> {
        let theta = 0.5 * (bath.mu + corr.upsilon);
        if !(theta > 0.0) {
            return Err(domain(format!(
                "(mu + upsilon)/2 must be positive, got {theta}"
            )));
        }
        let wc = bath.omega_c;
        let sa = bath.alpha.sqrt();
        let g = gamma(theta)? * wc.powf(theta);
        let g1 = gamma(theta + 1.0)? * wc.powf(theta + 1.0);
        Ok(Self {
            theta,
            omega_c: wc,
            k_pref: 2.0 * sa * g,
            k_offset: 0.5 * gamma(corr.upsilon)? * wc.powf(corr.upsilon),
            phi_pref: sa * g,
            dk_pref: 2.0 * sa * g1,
            dphi_pref: sa * g1,
        })
    }

    fn k(&self, t: f64) -> f64 {
        self.k_pref * brace(self.theta, self.omega_c * t) - self.k_offset
    }

    fn phi(&self, t: f64) -> f64 {
        let x = self.omega_c * t;
        let w = (-0.5 * self.theta * (x * x).ln_1p()).exp();
        self.phi_pref * (self.theta * x.atan()).sin() * w
    }

    fn rates(&self, t: f64) -> (f64, f64) {
        let (a, b) = rate_kernels(self.theta, self.omega_c * t);
        (self.dk_pref * a, self.dphi_pref * b)
    }

    fn k_inf(&self) -> f64 {
        self.k_pref - self.k_offset
    }
}

/// Evaluator for one parameter set; the gamma prefactors are computed once.
#[derive(Debug, Clone)]
pub struct DephasingModel {
    params: ModelParams,
    decay: DecayTerm,
    corr: Option<CorrTerm>,
    consts: InitConstants,
}

impl DephasingModel {
    pub fn new(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        let decay = DecayTerm::new(&params.bath)?;
        let corr = if params.corr.lambda > 0.0 {
            Some(CorrTerm::new(&params.bath, &params.corr)?)
        } else {
            None
        };
        let consts = compute_init_constants(params)?;
        Ok(Self {
            params: *params,
            decay,
            corr,
            consts,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn init_constants(&self) -> InitConstants {
        self.consts
    }

    fn lambda(&self) -> f64 {
        self.params.corr.lambda
    }

    /// C_λ⁻¹ {1 − λ + λ exp[k(t) − 2iφ(t)]}, or 1 for the product state.
    fn correlation_factor(&self, t: f64) -> Complex64 {
        match &self.corr {
            None => Complex64::new(1.0, 0.0),
            Some(c) => {
                let lam = self.lambda();
                let e = Complex64::new(c.k(t), -2.0 * c.phi(t)).exp();
                (e * lam + (1.0 - lam)) / self.consts.norm_c
            }
        }
    }

    /// Υ_λ(t).
    pub fn factor(&self, t: f64) -> Result<Complex64> {
        check_time(t)?;
        let r = self.decay.value(t)?;
        let base = Complex64::new(-r, -2.0 * self.params.qubit.omega0 * t).exp();
        Ok(match self.corr {
            None => base,
            Some(_) => self.correlation_factor(t) * base,
        })
    }

    /// |Υ_λ(t)|, which does not depend on ω₀.
    pub fn magnitude(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        let r = self.decay.value(t)?;
        Ok(self.correlation_factor(t).norm() * (-r).exp())
    }

    /// dΥ_λ/dt from the closed-form rates ṙ, k̇, φ̇.
    pub fn derivative(&self, t: f64) -> Result<Complex64> {
        check_time(t)?;
        let w0 = self.params.qubit.omega0;
        let r = self.decay.value(t)?;
        let rdot = self.decay.rate(t);
        let base = Complex64::new(-r, -2.0 * w0 * t).exp();
        let phase_rate = Complex64::new(-rdot, -2.0 * w0);
        Ok(match &self.corr {
            None => phase_rate * base,
            Some(c) => {
                let lam = self.lambda();
                let e = Complex64::new(c.k(t), -2.0 * c.phi(t)).exp();
                let (kdot, phidot) = c.rates(t);
                let bracket = e * lam + (1.0 - lam);
                let inner = phase_rate * bracket + Complex64::new(kdot, -2.0 * phidot) * e * lam;
                inner * base / self.consts.norm_c
            }
        })
    }

    pub fn sample(&self, t: f64) -> Result<DephasingSample> {
        Ok(DephasingSample {
            t,
            ups: self.factor(t)?,
            dups: self.derivative(t)?,
        })
    }

    /// lim_{t→∞} |Υ_λ(t)|; zero unless the bath is super-Ohmic.
    pub fn stationary_magnitude(&self) -> f64 {
        if self.params.bath.mu <= 0.0 {
            return 0.0;
        }
        let r_inf = self.decay.pref;
        let corr = match &self.corr {
            None => 1.0,
            Some(c) => {
                let lam = self.lambda();
                (1.0 - lam + lam * c.k_inf().exp()) / self.consts.norm_c
            }
        };
        corr * (-r_inf).exp()
    }

    /// Reduced qubit state at time t.
    pub fn state(&self, t: f64) -> Result<QubitState> {
        Ok(state_with_coherence(&self.params.qubit, self.factor(t)?))
    }
}

pub(crate) fn state_with_coherence(q: &QubitSpec, ups: Complex64) -> QubitState {
    let n = q.ce.norm_sqr() + q.cg.norm_sqr();
    let rho_ee = q.ce.norm_sqr() / n;
    QubitState {
        rho_ee,
        rho_gg: 1.0 - rho_ee,
        rho_eg: q.ce * q.cg.conj() / n * ups,
    }
}

fn compute_init_constants(params: &ModelParams) -> Result<InitConstants> {
    let wc = params.bath.omega_c;
    let ups = params.corr.upsilon;
    let lam = params.corr.lambda;
    let overlap_s = (-0.5 * gamma(ups)? * wc.powf(ups)).exp();
    let norm_c = ((1.0 - lam).powi(2) + lam * lam + 2.0 * lam * (1.0 - lam) * overlap_s).sqrt();
    let ups0 = (1.0 - lam + lam * overlap_s) / norm_c;
    Ok(InitConstants {
        overlap_s,
        norm_c,
        ups0,
    })
}

/// Decay exponent r(t) of the product-state dephasing factor.
pub fn decay_exponent(t: f64, bath: &BathSpec) -> Result<f64> {
    bath.validate()?;
    check_time(t)?;
    DecayTerm::new(bath)?.value(t)
}

/// Correlation terms (k(t), φ(t)).
pub fn corr_terms(t: f64, bath: &BathSpec, corr: &CorrelationSpec) -> Result<(f64, f64)> {
    bath.validate()?;
    corr.validate()?;
    check_time(t)?;
    let c = CorrTerm::new(bath, corr)?;
    Ok((c.k(t), c.phi(t)))
}

pub fn init_constants(params: &ModelParams) -> Result<InitConstants> {
    params.validate()?;
    compute_init_constants(params)
}

/// Υ_λ(t).
pub fn dephasing_factor(t: f64, params: &ModelParams) -> Result<Complex64> {
    DephasingModel::new(params)?.factor(t)
}

/// dΥ_λ/dt.
pub fn dephasing_derivative(t: f64, params: &ModelParams) -> Result<Complex64> {
    DephasingModel::new(params)?.derivative(t)
}

/// |Υ_λ(∞)|.
pub fn stationary_magnitude(params: &ModelParams) -> Result<f64> {
    Ok(DephasingModel::new(params)?.stationary_magnitude())
}

pub fn reduced_state(t: f64, params: &ModelParams) -> Result<QubitState> {
    DephasingModel::new(params)?.state(t)
}

/// Scans `n` uniform times on `[0, t_max]` and reports the first |Υ| above
/// 1 + [`PHYSICALITY_SLACK`] as [`Error::Unphysical`].
pub fn check_physicality(params: &ModelParams, t_max: f64, n: usize) -> Result<()> {
    let model = DephasingModel::new(params)?;
    let n = n.max(2);
    for i in 0..n {
        let t = t_max * i as f64 / (n - 1) as f64;
        let m = model.magnitude(t)?;
        if m > 1.0 + PHYSICALITY_SLACK || !m.is_finite() {
            return Err(Error::Unphysical { t, magnitude: m });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn bath(alpha: f64, mu: f64) -> BathSpec {
        BathSpec::new(alpha, mu, 1.0).unwrap()
    }

    fn params(alpha: f64, mu: f64, lambda: f64, upsilon: f64) -> ModelParams {
        ModelParams::new(
            bath(alpha, mu),
            CorrelationSpec::new(lambda, upsilon).unwrap(),
            QubitSpec::default(),
        )
        .unwrap()
    }

    #[test]
    fn decay_exponent_examples() {
        assert_eq!(decay_exponent(0.0, &bath(0.2, 2.0)).unwrap(), 0.0);
        // arctan 1 = π/4, cos(π/2) = 0 → 4·0.2·Γ(2)
        assert!((decay_exponent(1.0, &bath(0.2, 2.0)).unwrap() - 0.8).abs() < 1e-12);
        let ohmic = decay_exponent(1.0, &bath(0.2, 1e-6)).unwrap();
        assert!((ohmic - 0.4 * 2f64.ln()).abs() < 1e-12);
        assert!((ohmic - 0.277_259).abs() < 1e-6);
        let near = decay_exponent(1.0, &bath(0.2, 1e-3)).unwrap();
        assert!((near - ohmic).abs() < 1e-4);
    }

    #[test]
    fn decay_exponent_direct_formula_near_ohmic() {
        // 40-digit reference values of the direct formula at μ = 1e-3
        let b = bath(0.2, 1e-3);
        let cases = [
            (0.1, 0.003_981_800_211_004_493),
            (1.0, 0.277_297_608_432_669_98),
            (10.0, 1.843_720_586_475_753_9),
        ];
        for (t, want) in cases {
            let r = decay_exponent(t, &b).unwrap();
            assert!(((r - want) / want).abs() < 1e-11, "t = {t}: {r} vs {want}");
        }
    }

    #[test]
    fn decay_exponent_rejects_negative_time() {
        assert!(matches!(
            decay_exponent(-1.0, &bath(0.2, 1.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn sub_ohmic_exponent_is_non_negative_and_growing() {
        let b = bath(0.3, -0.7);
        let mut prev = 0.0;
        for i in 1..200 {
            let r = decay_exponent(i as f64 * 0.5, &b).unwrap();
            assert!(r >= prev);
            prev = r;
        }
    }

    #[test]
    fn corr_terms_examples() {
        let corr = CorrelationSpec::new(1.0, 1.5).unwrap();
        let (k, phi) = corr_terms(0.0, &bath(0.2, 1.0), &corr).unwrap();
        assert!((k + 0.5 * PI.sqrt() / 2.0).abs() < 1e-12);
        assert!((k + 0.443_113).abs() < 1e-6);
        assert_eq!(phi, 0.0);

        let corr = CorrelationSpec::new(1.0, 2.0).unwrap();
        let (k, phi) = corr_terms(1.0, &bath(0.25, 2.0), &corr).unwrap();
        assert!((k - 0.5).abs() < 1e-12, "k = {k}");
        assert!((phi - 0.25).abs() < 1e-12, "phi = {phi}");

        let (_, phi) = corr_terms(1e9, &bath(0.25, 2.0), &corr).unwrap();
        assert!(phi.abs() < 1e-12);
    }

    #[test]
    fn corr_terms_require_positive_theta() {
        let corr = CorrelationSpec::new(0.5, 0.5).unwrap();
        assert!(corr_terms(1.0, &bath(0.2, -0.6), &corr).is_err());
        assert!(corr_terms(-1.0, &bath(0.2, 1.0), &corr).is_err());
    }

    #[test]
    fn init_constants_examples() {
        let c = init_constants(&params(0.2, 1.0, 0.0, 1.5)).unwrap();
        assert_eq!(c.norm_c, 1.0);
        assert_eq!(c.ups0, 1.0);
        assert!((c.overlap_s - 0.642_034_355_986_471_9).abs() < 1e-12);

        let c = init_constants(&params(0.2, 1.0, 1.0, 1.5)).unwrap();
        assert!((c.ups0 - 0.642_034_355_986_471_9).abs() < 1e-12);

        let c = init_constants(&params(0.2, 1.0, 0.5, 1.5)).unwrap();
        assert!((c.norm_c - 0.906_099_982_338_172_2).abs() < 1e-12);
        assert!(c.ups0 > 0.0 && c.ups0 < 1.0);
    }

    #[test]
    fn dephasing_factor_examples() {
        let p = params(0.2, 2.0, 0.0, 1.5);
        let u = dephasing_factor(1.0, &p).unwrap();
        assert!((u.re - (-0.8f64).exp()).abs() < 1e-12 && u.im == 0.0);
        assert!((u.re - 0.449_329).abs() < 1e-6);

        for lam in [0.0, 0.2, 0.7, 1.0] {
            let p = params(0.3, 1.2, lam, 2.5).with_omega0(1.3);
            let u0 = dephasing_factor(0.0, &p).unwrap();
            let c = init_constants(&p).unwrap();
            assert!((u0.re - c.ups0).abs() < 1e-12 && u0.im.abs() < 1e-12);
        }
    }

    #[test]
    fn product_state_matches_closed_form() {
        let p = params(0.35, 0.8, 0.0, 1.5).with_omega0(2.0);
        for i in 0..50 {
            let t = 0.37 * i as f64;
            let r = decay_exponent(t, &p.bath).unwrap();
            let want = Complex64::new(-r, -2.0 * 2.0 * t).exp();
            assert!((dephasing_factor(t, &p).unwrap() - want).norm() < 1e-12);
        }
    }

    #[test]
    fn derivative_at_origin() {
        let p = params(0.2, 1.5, 0.6, 2.0).with_omega0(0.7);
        let c = init_constants(&p).unwrap();
        let d = dephasing_derivative(0.0, &p).unwrap();
        // ṙ(0) = k̇(0) = 0 but φ̇(0) = √α Γ(ϑ+1) ω_c^{ϑ+1}, and e^{k(0)} = s
        let phi_dot0 = 0.2f64.sqrt() * crate::mathcore::gamma(2.75).unwrap();
        let want = Complex64::new(
            0.0,
            -2.0 * (0.7 * c.ups0 + 0.6 * phi_dot0 * c.overlap_s / c.norm_c),
        );
        assert!((d - want).norm() < 1e-12, "{d} vs {want}");
    }

    #[test]
    fn product_state_derivative_is_real_decay_where_rate_positive() {
        // for μ ≤ 1 the decay exponent is monotone, so Υ̇ ≤ 0 for all t
        let p = params(0.2, 0.8, 0.0, 1.5);
        for i in 0..200 {
            let t = 0.1 * i as f64;
            let d = dephasing_derivative(t, &p).unwrap();
            assert_eq!(d.im, 0.0);
            assert!(d.re <= 0.0);
        }
    }

    #[test]
    fn stationary_magnitude_examples() {
        assert_eq!(
            stationary_magnitude(&params(0.2, -0.5, 0.0, 1.5)).unwrap(),
            0.0
        );
        assert_eq!(
            stationary_magnitude(&params(0.2, 0.0, 0.0, 1.5)).unwrap(),
            0.0
        );
        // references from 30-digit evaluation of the closed form
        let s0 = stationary_magnitude(&params(0.2, 1.46, 0.0, 1.5)).unwrap();
        assert!((s0 - 0.492_390_356_702_250_4).abs() < 1e-12);
        let s1 = stationary_magnitude(&params(0.2, 1.46, 1.0, 1.5)).unwrap();
        assert!((s1 - 0.698_122_449_621_936_3).abs() < 1e-12);
    }

    #[test]
    fn reduced_state_examples() {
        let p = params(0.2, 2.0, 0.0, 1.5);
        let s = reduced_state(0.0, &p).unwrap();
        assert!((s.rho_ee - 0.5).abs() < 1e-15 && (s.rho_gg - 0.5).abs() < 1e-15);
        assert!((s.rho_eg - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(s.trace(), 1.0);

        let s = reduced_state(1.0, &p).unwrap();
        assert!((s.rho_eg.norm() - 0.224_664).abs() < 1e-6);

        let q = QubitSpec::new(0.0, Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)).unwrap();
        let p = ModelParams {
            qubit: q,
            ..params(0.4, 1.1, 0.3, 2.0)
        };
        for i in 0..20 {
            let s = reduced_state(i as f64 * 0.9, &p).unwrap();
            assert_eq!(s.trace(), 1.0);
            s.validate().unwrap();
        }
    }

    #[test]
    fn validation_rejects_bad_params() {
        assert!(BathSpec::new(0.0, 1.0, 1.0).is_err());
        assert!(BathSpec::new(0.2, -1.0, 1.0).is_err());
        assert!(BathSpec::new(0.2, 1.0, 0.0).is_err());
        assert!(CorrelationSpec::new(1.1, 1.0).is_err());
        assert!(CorrelationSpec::new(0.5, 0.0).is_err());
        assert!(QubitSpec::new(
            -1.0,
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(FRAC_1_SQRT_2, 0.0)
        )
        .is_err());
        assert!(QubitSpec::new(0.0, Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)).is_err());
        // ϑ ≤ 0 is only a problem once the correlated component is present
        let b = bath(0.2, -0.8);
        let c = CorrelationSpec::new(0.0, 0.5).unwrap();
        assert!(ModelParams::new(b, c, QubitSpec::default()).is_ok());
        let c = CorrelationSpec::new(0.1, 0.5).unwrap();
        assert!(ModelParams::new(b, c, QubitSpec::default()).is_err());
    }

    #[test]
    fn physicality_diagnostic_names_the_violation() {
        assert!(check_physicality(&params(0.2, 1.46, 1.0, 1.5), 50.0, 2000).is_ok());
        let bad = QubitState {
            rho_ee: 0.5,
            rho_gg: 0.5,
            rho_eg: Complex64::new(0.6, 0.0),
        };
        assert!(bad.validate().is_err());
    }
}
