use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("quadrature failed on [{lo}, {hi}]: estimated error {error:e} exceeds tolerance {tolerance:e} after {panels} panels")]
    QuadratureFailure {
        lo: f64,
        hi: f64,
        error: f64,
        tolerance: f64,
        panels: usize,
    },

    #[error("Monte Carlo estimator cannot resolve the comparison at R = {radius}: {detail}")]
    EstimatorInconclusive { radius: f64, detail: String },

    #[error("no violation found below R = {budget}")]
    SearchBudgetExceeded { budget: f64 },

    #[error("{censored} of {paths} paths exhausted the step budget")]
    ExcessiveCensoring { censored: u64, paths: u64 },

    #[error("fiber sectional curvature floor {0} is negative")]
    FiberFloorNegative(f64),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl Error {
    /// Variant name, for structured reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::NonFinite(_) => "non_finite",
            Error::Parse { .. } => "parse",
            Error::InvalidInput(_) => "invalid_input",
            Error::QuadratureFailure { .. } => "quadrature_failure",
            Error::EstimatorInconclusive { .. } => "estimator_inconclusive",
            Error::SearchBudgetExceeded { .. } => "search_budget_exceeded",
            Error::ExcessiveCensoring { .. } => "excessive_censoring",
            Error::FiberFloorNegative(_) => "fiber_floor_negative",
            Error::Inconclusive(_) => "inconclusive",
            Error::Precondition(_) => "precondition",
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
