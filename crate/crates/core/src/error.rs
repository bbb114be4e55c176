use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    /// Every bid is zero, so the shadow price would be zero.
    #[error("degenerate shadow price: bids sum to {sum}")]
    DegeneratePrice { sum: f64 },

    /// Two parallel sequences that must line up do not.
    #[error("length mismatch: {left} allocations for {right} utilities")]
    LengthMismatch { left: usize, right: usize },

    /// Rounding left no candidate whose total fits in the bandwidth.
    #[error("exhausted bandwidth: smallest candidate total {min_total} exceeds R = {bandwidth}")]
    ExhaustedBandwidth { min_total: u64, bandwidth: f64 },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    /// The exhaustive search was asked to enumerate more than it allows.
    #[error("oracle refused: {0}")]
    OracleGuard(String),
}
