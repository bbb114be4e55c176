//! Integer resource block allocation from the continuous optimum.
//!
//! Each UE's rate is replaced by its floor and ceiling (a floor of zero is
//! lifted to one RB, since no UE may be dropped). The Cartesian product of
//! these per-UE pairs is the candidate set, at most `2^M` vectors. Vectors
//! whose total exceeds `R` are discarded and the survivors are ranked by
//! system log-utility `sum_i ln U_i(rb_i)`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::solver::{solve_continuous, ContinuousAllocation, Scenario};
use crate::utility::UtilityFunction;

pub const DEFAULT_TIE_TOLERANCE: f64 = 1e-9;

/// Integer RB counts, one per UE. Orders lexicographically by `rbs`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RbVector {
    rbs: Vec<u32>,
    total: u64,
}

impl RbVector {
    /// Returns `None` if any entry is zero.
    pub fn new(rbs: Vec<u32>) -> Option<Self> {
        if rbs.contains(&0) {
            return None;
        }
        let total = rbs.iter().map(|&rb| u64::from(rb)).sum();
        Some(RbVector { rbs, total })
    }

    pub fn rbs(&self) -> &[u32] {
        &self.rbs
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.rbs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rbs.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredRbVector<T> {
    pub rb: RbVector,
    pub log_utility: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllocationResult<T> {
    pub continuous: ContinuousAllocation<T>,
    /// Candidates with total <= R, lexicographic order.
    pub feasible_pool: Vec<ScoredRbVector<T>>,
    /// Pool members within the tie tolerance of the best log-utility.
    pub maximizers: Vec<ScoredRbVector<T>>,
}

fn boundary_pair<T: Scalar>(r: T) -> Result<(u32, u32)> {
    if !(r > T::zero()) || !r.is_finite() {
        return Err(Error::Domain {
            what: "continuous rate",
            value: r.to_f64().unwrap_or(f64::NAN),
        });
    }
    let to_u32 = |v: T| {
        v.to_u32().ok_or(Error::Domain {
            what: "continuous rate",
            value: r.to_f64().unwrap_or(f64::NAN),
        })
    };
    let lo = to_u32(r.floor())?.max(1);
    let hi = to_u32(r.ceil())?;
    Ok((lo, hi))
}

/// All floor/ceil combinations of `rates`, deduplicated, lexicographic.
pub fn boundary_candidates<T: Scalar>(rates: &[T]) -> Result<Vec<RbVector>> {
    let choices = rates
        .iter()
        .map(|&r| {
            boundary_pair(r).map(|(lo, hi)| if lo == hi { vec![lo] } else { vec![lo, hi] })
        })
        .collect::<Result<Vec<_>>>()?;
    if choices.is_empty() {
        return Ok(Vec::new());
    }

    let count: usize = choices.iter().map(Vec::len).product();
    let mut out = Vec::with_capacity(count);
    // odometer over the per-UE choices, last UE fastest
    let mut digits = vec![0usize; choices.len()];
    loop {
        let rbs = digits.iter().zip(&choices).map(|(&d, c)| c[d]).collect();
        out.push(RbVector::new(rbs).expect("boundary entries are at least 1"));
        let mut pos = choices.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < choices[pos].len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Keeps the candidates whose total fits in `bandwidth`, order preserved.
pub fn filter_feasible<T: Scalar>(candidates: Vec<RbVector>, bandwidth: T) -> Vec<RbVector> {
    candidates
        .into_iter()
        .filter(|c| T::from_u64(c.total).is_some_and(|t| t <= bandwidth))
        .collect()
}

/// `sum_i ln U_i(rbs_i)`.
pub fn system_log_utility<T: Scalar>(rb: &RbVector, utilities: &[UtilityFunction<T>]) -> Result<T> {
    if rb.len() != utilities.len() {
        return Err(Error::LengthMismatch {
            left: rb.len(),
            right: utilities.len(),
        });
    }
    rb.rbs
        .iter()
        .zip(utilities)
        .try_fold(T::zero(), |acc, (&n, u)| Ok(acc + u.log_eval(T::from_u32(n).unwrap())?))
}

pub fn score<T: Scalar>(
    candidates: Vec<RbVector>,
    utilities: &[UtilityFunction<T>],
) -> Result<Vec<ScoredRbVector<T>>> {
    candidates
        .into_iter()
        .map(|rb| {
            let log_utility = system_log_utility(&rb, utilities)?;
            Ok(ScoredRbVector { rb, log_utility })
        })
        .collect()
}

/// Members of `pool` whose log-utility is at least `max - tie_tol`, in
/// pool order.
pub fn select_maximizers<T: Scalar>(pool: &[ScoredRbVector<T>], tie_tol: T) -> Vec<ScoredRbVector<T>> {
    let Some(best) = pool.iter().map(|c| c.log_utility).reduce(T::max) else {
        return Vec::new();
    };
    pool.iter()
        .filter(|c| c.log_utility >= best - tie_tol)
        .cloned()
        .collect()
}

/// Full pipeline with the default tie tolerance.
pub fn allocate<T: Scalar>(s: &Scenario<T>) -> Result<AllocationResult<T>> {
    allocate_with(s, T::lit(DEFAULT_TIE_TOLERANCE))
}

pub fn allocate_with<T: Scalar>(s: &Scenario<T>, tie_tol: T) -> Result<AllocationResult<T>> {
    let continuous = solve_continuous(s)?;
    discretize(continuous, &s.utilities(), s.bandwidth, tie_tol)
}

/// Discrete stage alone: boundary candidates of `continuous.rates`,
/// feasibility against `bandwidth`, scoring and selection.
pub fn discretize<T: Scalar>(
    continuous: ContinuousAllocation<T>,
    utilities: &[UtilityFunction<T>],
    bandwidth: T,
    tie_tol: T,
) -> Result<AllocationResult<T>> {
    let candidates = boundary_candidates(&continuous.rates)?;
    let min_total = candidates.iter().map(RbVector::total).min().unwrap_or(0);
    let feasible = filter_feasible(candidates, bandwidth);
    if feasible.is_empty() {
        return Err(Error::ExhaustedBandwidth {
            min_total,
            bandwidth: bandwidth.to_f64().unwrap_or(f64::NAN),
        });
    }
    let feasible_pool = score(feasible, utilities)?;
    let maximizers = select_maximizers(&feasible_pool, tie_tol);
    Ok(AllocationResult {
        continuous,
        feasible_pool,
        maximizers,
    })
}
