//! Exact pure-dephasing dynamics of a qubit whose initial state is correlated
//! with a zero-temperature bath of Ohmic-like spectral density.
//!
//! The crate evaluates the complex dephasing factor Υ_λ(t) in closed form,
//! derives the relative-entropy and l1 coherence of the reduced qubit state,
//! locates the coherence-trapping time and computes quantum-speed-limit
//! ratios τ_QSL/t_c. The [`experiments`] module runs parameter sweeps and
//! optimizations, and [`cli`] exposes everything on the command line.

// `!(x > 0.0)` style checks are deliberate: they route NaN to the error branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Reference constants keep the digits they were published or computed with.
#![allow(clippy::excessive_precision)]

pub mod cli;
pub mod coherence;
pub mod dephasing;
pub mod error;
pub mod experiments;
pub mod mathcore;
pub mod output;
pub mod qsl;

pub use coherence::{
    initial_coherence, l1_coherence, rel_entropy_coherence, stationary_coherence, CoherenceValue,
};
pub use dephasing::{
    corr_terms, decay_exponent, dephasing_derivative, dephasing_factor, init_constants,
    reduced_state, stationary_magnitude, BathSpec, CorrelationSpec, DephasingModel,
    DephasingSample, InitConstants, ModelParams, QubitSpec, QubitState,
};
pub use error::{Error, Result};
pub use qsl::{qsl_ratio, relative_purity_metric, trapping_time, QslMode, QslResult, TrappingSpec};
