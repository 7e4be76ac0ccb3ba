use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("no coherence trapping: {0}")]
    NoTrapping(String),

    #[error("did not converge: {0}")]
    NonConvergence(String),

    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    #[error("unphysical dephasing factor: |Υ(t={t})| = {magnitude} exceeds 1")]
    Unphysical { t: f64, magnitude: f64 },
}

impl Error {
    /// Short machine-readable code, used in the `error_code` column of sweep tables.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Argument(_) => "argument",
            Error::NoTrapping(_) => "no_trapping",
            Error::NonConvergence(_) => "non_convergence",
            Error::ZeroDenominator(_) => "zero_denominator",
            Error::Unphysical { .. } => "unphysical",
        }
    }

    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence(_) | Error::ZeroDenominator(_) | Error::Unphysical { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
