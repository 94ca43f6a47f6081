use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),

    #[error("root finding did not converge (residual {residual:.3e})")]
    RootFinding { residual: f64 },

    #[error("symbol has a(0) = 0; the co-analytic section is singular")]
    SingularSection,

    #[error("point {0} is not in the open unit disk")]
    OutsideDisk(String),

    #[error("polynomial division left remainder {remainder:.3e} (allowed {allowed:.3e})")]
    InexactDivision { remainder: f64, allowed: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("symbol is extreme: {0}")]
    NonExtremeViolation(String),

    #[error("too few nonzero coefficients in fit window: {found} < {required}")]
    TooFewCoefficients { found: usize, required: usize },

    #[error("linear algebra failure: {0}")]
    LinearAlgebra(String),
}

impl Error {
    /// Stable name of the variant, used in machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidSymbol(_) => "invalid-symbol",
            Error::RootFinding { .. } => "root-finding",
            Error::SingularSection => "singular-section",
            Error::OutsideDisk(_) => "outside-disk",
            Error::InexactDivision { .. } => "inexact-division",
            Error::Precondition(_) => "precondition",
            Error::NonExtremeViolation(_) => "non-extreme-violation",
            Error::TooFewCoefficients { .. } => "too-few-coefficients",
            Error::LinearAlgebra(_) => "linear-algebra",
        }
    }
}
