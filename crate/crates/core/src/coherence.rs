//! Relative-entropy and l1-norm coherence of the reduced qubit state.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dephasing::{state_with_coherence, DephasingModel, ModelParams, QubitState};
use crate::error::Result;
use crate::mathcore::binary_entropy;

/// Both coherence measures of one state. Relative entropy is in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceValue {
    pub rel_entropy: f64,
    pub l1: f64,
}

impl CoherenceValue {
    pub fn of(state: &QubitState) -> Result<Self> {
        Ok(Self {
            rel_entropy: rel_entropy_coherence(state)?,
            l1: l1_coherence(state),
        })
    }
}

/// S(ρ_diag) − S(ρ) with base-2 logarithms.
///
/// The eigenvalues of the 2×2 state are ½(1 ± √((ρ_ee − ρ_gg)² + 4|ρ_eg|²)).
pub fn rel_entropy_coherence(state: &QubitState) -> Result<f64> {
    state.validate()?;
    let diff = state.rho_ee - state.rho_gg;
    let radius = (diff * diff + 4.0 * state.rho_eg.norm_sqr()).sqrt();
    // validate() admits |ρ_eg|² up to rounding above ρ_ee ρ_gg
    let top = (0.5 * (1.0 + radius)).min(1.0);
    let s_diag = binary_entropy(state.rho_ee.clamp(0.0, 1.0))?;
    let s_rho = binary_entropy(top)?;
    Ok((s_diag - s_rho).max(0.0))
}

/// Σ_{i≠j} |ρ_ij| = 2|ρ_eg|.
pub fn l1_coherence(state: &QubitState) -> f64 {
    2.0 * state.rho_eg.norm()
}

/// Coherence of the t → ∞ state.
pub fn stationary_coherence(params: &ModelParams) -> Result<CoherenceValue> {
    let model = DephasingModel::new(params)?;
    stationary_coherence_of(&model)
}

pub(crate) fn stationary_coherence_of(model: &DephasingModel) -> Result<CoherenceValue> {
    let ups_inf = Complex64::new(model.stationary_magnitude(), 0.0);
    CoherenceValue::of(&state_with_coherence(&model.params().qubit, ups_inf))
}

/// Relative-entropy coherence of the initial reduced state.
pub fn initial_coherence(params: &ModelParams) -> Result<f64> {
    let model = DephasingModel::new(params)?;
    rel_entropy_coherence(&model.state(0.0)?)
}

/// Equal-weight closed form 1 − H₂((1 + Υ₀)/2) for a real initial factor Υ₀.
pub fn initial_coherence_equal_weights(ups0: f64) -> Result<f64> {
    Ok(1.0 - binary_entropy(0.5 * (1.0 + ups0))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dephasing::{BathSpec, CorrelationSpec, QubitSpec};
    use crate::error::Error;

    fn params(alpha: f64, mu: f64, lambda: f64, upsilon: f64) -> ModelParams {
        ModelParams::new(
            BathSpec::new(alpha, mu, 1.0).unwrap(),
            CorrelationSpec::new(lambda, upsilon).unwrap(),
            QubitSpec::default(),
        )
        .unwrap()
    }

    /// Independent entropy: eigen-decomposition by explicit quadratic roots, natural logs.
    fn rel_entropy_oracle(ee: f64, eg_abs: f64) -> f64 {
        let gg = 1.0 - ee;
        let tr = 1.0;
        let det = ee * gg - eg_abs * eg_abs;
        let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
        let ent = |ps: &[f64]| -> f64 {
            ps.iter()
                .filter(|p| **p > 0.0)
                .map(|p| -p * p.ln())
                .sum::<f64>()
                / 2f64.ln()
        };
        ent(&[ee, gg]) - ent(&[(tr + disc) / 2.0, (tr - disc) / 2.0])
    }

    #[test]
    fn diagonal_and_pure_states() {
        let diag = QubitState {
            rho_ee: 0.3,
            rho_gg: 0.7,
            rho_eg: Complex64::new(0.0, 0.0),
        };
        assert_eq!(rel_entropy_coherence(&diag).unwrap(), 0.0);
        assert_eq!(l1_coherence(&diag), 0.0);
        let plus = QubitState::balanced(Complex64::new(0.5, 0.0));
        assert!((rel_entropy_coherence(&plus).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(l1_coherence(&plus), 1.0);
    }

    #[test]
    fn stationary_anchor_state() {
        let s = QubitState::balanced(Complex64::new(0.5 * 0.492_35, 0.0));
        let c = rel_entropy_coherence(&s).unwrap();
        assert!((c - rel_entropy_oracle(0.5, 0.5 * 0.492_35)).abs() < 1e-12);
        assert!((c - 0.1827).abs() < 1e-4);
        assert!(
            (l1_coherence(&QubitState::balanced(Complex64::new(0.224_664, 0.0))) - 0.449_328).abs()
                < 1e-12
        );
    }

    #[test]
    fn positivity_violation_is_domain_error() {
        let s = QubitState::balanced(Complex64::new(0.0, 0.51));
        assert!(matches!(rel_entropy_coherence(&s), Err(Error::Domain(_))));
    }

    #[test]
    fn stationary_coherence_examples() {
        let c = stationary_coherence(&params(0.2, 1.46, 0.0, 1.5)).unwrap();
        assert!((c.rel_entropy - 0.182_746_883_646_016_4).abs() < 1e-10);
        assert!((c.rel_entropy - 0.1827).abs() < 5e-4);
        assert!((c.l1 - 0.492_390_356_702_250_4).abs() < 1e-12);

        let c = stationary_coherence(&params(0.2, 1.46, 1.0, 1.5)).unwrap();
        assert!((c.rel_entropy - 0.387_815_387_575_670_0).abs() < 1e-10);

        let c = stationary_coherence(&params(0.2, -0.5, 0.0, 1.5)).unwrap();
        assert_eq!((c.rel_entropy, c.l1), (0.0, 0.0));
    }

    #[test]
    fn initial_coherence_examples() {
        assert!((initial_coherence(&params(0.2, 1.0, 0.0, 1.5)).unwrap() - 1.0).abs() < 1e-15);
        // Υ₀ = exp(−Γ(3/2)/2) = 0.642034; 30-digit reference 0.322153224297396666
        let c1 = initial_coherence(&params(0.2, 1.0, 1.0, 1.5)).unwrap();
        assert!((c1 - 0.322_153_224_297_396_7).abs() < 1e-12, "{c1}");
        let closed = initial_coherence_equal_weights(0.642_034_355_986_471_9).unwrap();
        assert!((c1 - closed).abs() < 1e-12);
        for lam in [0.01, 0.1, 0.5, 0.9, 1.0] {
            assert!(initial_coherence(&params(0.2, 1.0, lam, 1.5)).unwrap() < 1.0);
        }
    }

    #[test]
    fn stationary_coherence_ignores_omega0() {
        let p = params(0.3, 2.2, 0.6, 2.7);
        let a = stationary_coherence(&p).unwrap();
        let b = stationary_coherence(&p.with_omega0(5.0)).unwrap();
        assert!((a.rel_entropy - b.rel_entropy).abs() < 1e-12);
        assert!((a.l1 - b.l1).abs() < 1e-12);
    }

    #[test]
    fn measures_increase_with_coherence_magnitude() {
        let mut prev = (-1.0, -1.0);
        for i in 0..=500 {
            let m = 0.5 * i as f64 / 500.0;
            let s = QubitState::balanced(Complex64::new(m, 0.0));
            let cur = (rel_entropy_coherence(&s).unwrap(), l1_coherence(&s));
            assert!(cur.0 > prev.0 && cur.1 > prev.1, "not increasing at {m}");
            prev = cur;
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn phase_invariance(ee in 0.01f64..0.99, frac in 0.0f64..1.0, phase in 0.0f64..6.3) {
                let m = frac * (ee * (1.0 - ee)).sqrt();
                let a = QubitState { rho_ee: ee, rho_gg: 1.0 - ee, rho_eg: Complex64::new(m, 0.0) };
                let b = QubitState { rho_eg: Complex64::from_polar(m, phase), ..a };
                prop_assert!((rel_entropy_coherence(&a).unwrap() - rel_entropy_coherence(&b).unwrap()).abs() < 1e-12);
                prop_assert!((l1_coherence(&a) - l1_coherence(&b)).abs() < 1e-12);
            }

            #[test]
            fn matches_oracle_and_vanishes_only_without_coherence(ee in 0.01f64..0.99, frac in 0.0f64..1.0) {
                let m = frac * (ee * (1.0 - ee)).sqrt();
                let s = QubitState { rho_ee: ee, rho_gg: 1.0 - ee, rho_eg: Complex64::new(0.0, m) };
                let c = rel_entropy_coherence(&s).unwrap();
                prop_assert!((c - rel_entropy_oracle(ee, m)).abs() < 1e-9);
                prop_assert!((0.0..=1.0).contains(&c));
                prop_assert!((0.0..=1.0).contains(&l1_coherence(&s)));
                if m > 1e-6 {
                    prop_assert!(c > 0.0 && l1_coherence(&s) > 0.0);
                }
            }
        }
    }
}
