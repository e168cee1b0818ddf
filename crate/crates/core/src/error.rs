use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Arguments outside the domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series or quadrature did not reach its tolerance.
    #[error("truncation: {what} not converged after {terms} terms (remainder bound {bound:e})")]
    Truncation {
        what: &'static str,
        terms: usize,
        bound: f64,
    },

    #[error("point (t = {t}, r = {r}) lies outside the light cone r < φ(t) = {cone}")]
    OutsideCone { t: f64, r: f64, cone: f64 },

    #[error("non-finite values at t = {t}: {detail}")]
    NonFinite { t: f64, detail: String },

    /// The sampling is too coarse for the requested accuracy.
    #[error("refinement required: {0}")]
    Refinement(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Numerical failures as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Truncation { .. } | Error::NonFinite { .. } | Error::Refinement(_)
        )
    }
}
