use thiserror::Error;

/// Errors raised by the engine.
///
/// Each variant maps to a stable machine-readable code via [`Error::code`],
/// which the command-line front end echoes in its reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("arity mismatch: expected {expected} indices, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("empty generator set")]
    EmptyGenerators,

    #[error("ideal is not m-primary (infinite colength)")]
    NotMPrimary,

    #[error("exact volume is supported for dimension <= 3, got {0}")]
    DimensionUnsupported(usize),

    #[error("index {index} is beyond the stored table of length {len}")]
    IndexOutOfTable { index: u64, len: usize },

    #[error("no Noetherian scale found for filtration {0}")]
    NotNoetherian(usize),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("no nonsingular sample point set after {0} draws")]
    ExhaustedRetries(usize),

    #[error("interpolant has degree {found}, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("top-degree coefficients differ across residue classes")]
    TopCoefficientDrift,

    #[error("quasi-polynomial fit does not reproduce the sampled values")]
    FitValidation,

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable identifier for reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::ArityMismatch { .. } => "arity_mismatch",
            Error::EmptyGenerators => "empty_generators",
            Error::NotMPrimary => "not_m_primary",
            Error::DimensionUnsupported(_) => "dimension_unsupported",
            Error::IndexOutOfTable { .. } => "index_out_of_table",
            Error::NotNoetherian(_) => "not_noetherian",
            Error::BudgetExceeded(_) => "budget_exceeded",
            Error::ExhaustedRetries(_) => "exhausted_retries",
            Error::DegreeMismatch { .. } => "degree_mismatch",
            Error::TopCoefficientDrift => "top_coefficient_drift",
            Error::FitValidation => "fit_validation",
            Error::InvalidFiltration(_) => "invalid_filtration",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Parse(_) => "parse_error",
        }
    }

    /// True for errors caused by malformed input rather than by the computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. }
                | Error::ArityMismatch { .. }
                | Error::EmptyGenerators
                | Error::NotMPrimary
                | Error::InvalidFiltration(_)
                | Error::InvalidArgument(_)
                | Error::Parse(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
