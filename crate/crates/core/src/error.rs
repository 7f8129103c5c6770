use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DegenError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("indeterminate image at t = {t}: the map sends the point to (0, 0)")]
    IndeterminateImage { t: String },
    #[error("degenerate parameter t = {t}: |resultant| = {resultant} is below the detection threshold")]
    Degenerate { t: String, resultant: String },
    #[error("valuation hit the truncation sentinel at step {step} (order {order}); increase the truncation order")]
    TruncationTooLow { step: usize, order: usize },
    #[error("infeasible schedule: {0}")]
    Infeasible(String),
    #[error("orbit hits the target exactly at n = {0}")]
    ExactHit(usize),
    #[error("root finder failed: {0}")]
    RootFinder(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("precision budget exceeded: need {needed} bits, have {available}")]
    PrecisionBudget { needed: u64, available: u64 },
}

pub type Result<T> = std::result::Result<T, DegenError>;
