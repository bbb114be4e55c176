//! Exhaustive ground truth for the discrete stage.
//!
//! [`brute_force_discrete`] walks every vector in `{1..=Q}^M` and keeps the
//! feasible one with the highest system log-utility. It is deliberately
//! naive: no pruning and no reuse of the boundary machinery. Exact ties go
//! to the lexicographically smallest vector, which falls out of visiting the
//! grid in lexicographic order and only replacing the incumbent on a strict
//! improvement.

use num_bigint::BigUint;

use crate::discrete::{RbVector, ScoredRbVector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::solver::Scenario;

pub const MAX_ORACLE_UES: usize = 4;
pub const MAX_ORACLE_GRID: u32 = 128;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult<T> {
    pub best: ScoredRbVector<T>,
    /// Grid points visited, feasible or not.
    pub evaluated_count: u64,
    pub grid: u32,
}

/// Best feasible vector over the full grid `{1..=grid}^M`.
pub fn brute_force_discrete<T: Scalar>(s: &Scenario<T>, grid: u32) -> Result<OracleResult<T>> {
    search(s, grid, |_, _| true)
}

/// Same search, but only grid points whose every entry lies within one unit
/// of the matching continuous rate, i.e. the floor/ceil boundary set.
pub fn brute_force_restricted<T: Scalar>(
    s: &Scenario<T>,
    grid: u32,
    rates: &[T],
) -> Result<OracleResult<T>> {
    if rates.len() != s.len() {
        return Err(Error::LengthMismatch {
            left: rates.len(),
            right: s.len(),
        });
    }
    search(s, grid, |i, m| (T::from_u32(m).unwrap() - rates[i]).abs() < T::one())
}

fn search<T: Scalar>(
    s: &Scenario<T>,
    grid: u32,
    keep: impl Fn(usize, u32) -> bool,
) -> Result<OracleResult<T>> {
    s.validate()?;
    let m = s.len();
    if m > MAX_ORACLE_UES {
        return Err(Error::OracleGuard(format!(
            "{m} UEs exceeds the limit of {MAX_ORACLE_UES}"
        )));
    }
    if grid == 0 || grid > MAX_ORACLE_GRID {
        return Err(Error::OracleGuard(format!(
            "grid bound {grid} outside 1..={MAX_ORACLE_GRID}"
        )));
    }

    // ln U_i(v) for v in 1..=grid
    let table = s
        .ues
        .iter()
        .map(|ue| {
            (1..=grid)
                .map(|v| ue.utility.log_eval(T::from_u32(v).unwrap()))
                .collect::<Result<Vec<T>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut point = vec![1u32; m];
    let mut evaluated = 0u64;
    let mut best: Option<(Vec<u32>, T)> = None;
    let mut min_total: Option<u64> = None;
    loop {
        evaluated += 1;
        if point.iter().enumerate().all(|(i, &v)| keep(i, v)) {
            let total: u64 = point.iter().map(|&v| u64::from(v)).sum();
            min_total = Some(min_total.map_or(total, |t| t.min(total)));
            if T::from_u64(total).unwrap() <= s.bandwidth {
                let value = point
                    .iter()
                    .enumerate()
                    .fold(T::zero(), |acc, (i, &v)| acc + table[i][v as usize - 1]);
                if best.as_ref().is_none_or(|(_, b)| value > *b) {
                    best = Some((point.clone(), value));
                }
            }
        }

        let mut pos = m;
        loop {
            if pos == 0 {
                let Some((rbs, log_utility)) = best else {
                    return Err(Error::ExhaustedBandwidth {
                        min_total: min_total.unwrap_or(0),
                        bandwidth: s.bandwidth.to_f64().unwrap_or(f64::NAN),
                    });
                };
                return Ok(OracleResult {
                    best: ScoredRbVector {
                        rb: RbVector::new(rbs).expect("grid starts at 1"),
                        log_utility,
                    },
                    evaluated_count: evaluated,
                    grid,
                });
            }
            pos -= 1;
            if point[pos] < grid {
                point[pos] += 1;
                break;
            }
            point[pos] = 1;
        }
    }
}

/// Candidate counts `(n^M, 2^M)` for a full per-UE search over `n` values
/// versus floor/ceil boundary mapping.
pub fn complexity_count(ues: u32, per_ue: u32) -> (BigUint, BigUint) {
    (
        BigUint::from(per_ue).pow(ues),
        BigUint::from(2u32).pow(ues),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::SolverParams;
    use crate::utility::UtilityFunction;

    fn scenario(u: Vec<UtilityFunction<f64>>, r: f64) -> Scenario<f64> {
        Scenario::new(u, r, SolverParams::default()).unwrap()
    }

    #[test]
    fn lone_ue_fills_budget() {
        let u = UtilityFunction::logarithmic(3.0, 100.0).unwrap();
        let o = brute_force_discrete(&scenario(vec![u], 50.0), 100).unwrap();
        assert_eq!(o.best.rb.rbs(), &[50]);
        assert_eq!(o.evaluated_count, 100);
    }

    #[test]
    fn identical_pair_splits() {
        let u = UtilityFunction::logarithmic(2.0, 100.0).unwrap();
        let o = brute_force_discrete(&scenario(vec![u, u], 10.0), 10).unwrap();
        assert_eq!(o.best.rb.rbs(), &[5, 5]);
        assert_eq!(o.evaluated_count, 100);
    }

    #[test]
    fn voip_ftp_pair_fixture() {
        // Sigmoidal(5,10) with Logarithmic(15,100) on R = 15: the VoIP flow
        // sits just past its inflection point and FTP takes the rest.
        let s = scenario(
            vec![
                UtilityFunction::sigmoidal(5.0, 10.0).unwrap(),
                UtilityFunction::logarithmic(15.0, 100.0).unwrap(),
            ],
            15.0,
        );
        let o = brute_force_discrete(&s, 15).unwrap();
        assert_eq!(o.best.rb.rbs(), &[11, 4]);
        assert_eq!(o.evaluated_count, 225);
    }

    #[test]
    fn ties_go_to_lexicographically_smallest() {
        // saturated logarithmic utilities beyond r_max are not flat, so use
        // a grid where the pair (1,2)/(2,1) is an exact tie by symmetry
        let u = UtilityFunction::logarithmic(1.0, 100.0).unwrap();
        let o = brute_force_discrete(&scenario(vec![u, u], 3.0), 2).unwrap();
        assert_eq!(o.best.rb.rbs(), &[1, 2]);
    }

    #[test]
    fn guards() {
        let u = UtilityFunction::logarithmic(1.0, 100.0).unwrap();
        let five = scenario(vec![u; 5], 10.0);
        assert!(matches!(brute_force_discrete(&five, 4), Err(Error::OracleGuard(_))));
        let one = scenario(vec![u], 10.0);
        assert!(matches!(brute_force_discrete(&one, 129), Err(Error::OracleGuard(_))));
        assert!(matches!(brute_force_discrete(&one, 0), Err(Error::OracleGuard(_))));
    }

    #[test]
    fn restricted_to_boundary() {
        let u = UtilityFunction::logarithmic(1.0, 100.0).unwrap();
        let s = scenario(vec![u, u], 20.0);
        let o = brute_force_restricted(&s, 20, &[9.4, 10.6]).unwrap();
        // candidates (9,10) (9,11) (10,10) (10,11): (10,10) wins on symmetry
        assert_eq!(o.best.rb.rbs(), &[10, 10]);
        assert!(matches!(
            brute_force_restricted(&s, 20, &[1.0]),
            Err(Error::LengthMismatch { .. })
        ));
        // boundary set exceeds the budget
        let err = brute_force_restricted(&s.with_bandwidth(18.0), 20, &[9.4, 10.6]).unwrap_err();
        assert_eq!(err, Error::ExhaustedBandwidth { min_total: 19, bandwidth: 18.0 });
    }

    #[test]
    fn complexity_counts() {
        let (full, boundary) = complexity_count(100, 10);
        assert_eq!(full, BigUint::from(10u32).pow(100));
        assert_eq!(full.to_string().len(), 101);
        assert_eq!(boundary, BigUint::from(1u32) << 100);
        assert_eq!(complexity_count(1, 1), (BigUint::from(1u32), BigUint::from(2u32)));
        assert_eq!(
            complexity_count(6, 100),
            (BigUint::from(1_000_000_000_000u64), BigUint::from(64u32))
        );
        for m in 1..40 {
            let (a, b) = complexity_count(m, 2);
            assert_eq!(a, b);
        }
    }
}
