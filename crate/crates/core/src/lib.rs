//! Resource block allocation under utility proportional fairness.
//!
//! The pipeline has two stages:
//!
//! 1. [`solver`] relaxes the integer problem and runs the UE bid / eNB shadow
//!    price iteration until bids settle, producing continuous rates.
//! 2. [`discrete`] maps those rates onto their floor/ceil neighbours, drops
//!    vectors that overrun the eNB bandwidth and keeps the ones that maximize
//!    the system log-utility.
//!
//! [`oracle`] is an exhaustive grid search used to check the boundary mapping
//! and to count how many candidates each approach has to inspect.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the scalar for the common cases.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod discrete;
pub mod error;
pub mod oracle;
pub mod scalar;
pub mod solver;
pub mod utility;

pub use discrete::{
    allocate, allocate_with, boundary_candidates, discretize, filter_feasible, score, select_maximizers,
    system_log_utility, AllocationResult, RbVector, ScoredRbVector, DEFAULT_TIE_TOLERANCE,
};
pub use error::{Error, Result};
pub use oracle::{brute_force_discrete, brute_force_restricted, complexity_count, OracleResult};
pub use scalar::Scalar;
pub use solver::{
    enb_price_update, solve_continuous, ue_bid_update, ue_rate_response, ContinuousAllocation,
    Damping, Scenario, SolverParams, TraceStep, Ue,
};
pub use utility::{UtilityFunction, RATE_CAP};

pub type Utility64 = UtilityFunction<f64>;
pub type Utility32 = UtilityFunction<f32>;
pub type Scenario64 = Scenario<f64>;
pub type Scenario32 = Scenario<f32>;
pub type SolverParams64 = SolverParams<f64>;
pub type ContinuousAllocation64 = ContinuousAllocation<f64>;
pub type AllocationResult64 = AllocationResult<f64>;
pub type ScoredRbVector64 = ScoredRbVector<f64>;
pub type OracleResult64 = OracleResult<f64>;
