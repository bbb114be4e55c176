//! Relaxed (continuous) allocation by distributed bidding.
//!
//! Each round the eNB announces a shadow price `p = sum(w) / R`; every UE
//! replies with its best-response rate `argmax ln U(r) - p r` and the bid
//! `w = p r` that would buy it. Bid moves are clamped to a shrinking window
//! so the exchange settles. Once no bid moves by `delta` or more, the rates
//! are read back as `r = w / p`, which always sums to `R`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::utility::UtilityFunction;

/// Schedule for the largest bid move allowed in round `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Damping<T> {
    /// `l1 * e^{-n / l2}`
    Exponential { l1: T, l2: T },
    /// `l3 / n`
    Harmonic { l3: T },
}

impl<T: Scalar> Damping<T> {
    pub fn window(&self, n: usize) -> T {
        let n = T::from_count(n);
        match *self {
            Damping::Exponential { l1, l2 } => l1 * (-n / l2).exp(),
            Damping::Harmonic { l3 } => l3 / n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverParams<T> {
    /// Bids are settled once every bid moves by less than this.
    pub delta: T,
    pub max_iters: usize,
    pub damping: Damping<T>,
    /// Opening bid of every UE.
    pub w_init: T,
}

impl<T: Scalar> Default for SolverParams<T> {
    fn default() -> Self {
        SolverParams {
            delta: T::lit(1e-3),
            max_iters: 40,
            damping: Damping::Harmonic { l3: T::lit(10.0) },
            w_init: T::one(),
        }
    }
}

impl<T: Scalar> SolverParams<T> {
    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, v: T| {
            if v.is_finite() && v > T::zero() {
                Ok(())
            } else {
                Err(Error::InvalidScenario(format!("{name} must be > 0, got {v}")))
            }
        };
        check("delta", self.delta)?;
        check("w_init", self.w_init)?;
        match self.damping {
            Damping::Exponential { l1, l2 } => {
                check("l1", l1)?;
                check("l2", l2)?;
            }
            Damping::Harmonic { l3 } => check("l3", l3)?,
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidScenario("max_iters must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ue<T> {
    pub id: u32,
    pub utility: UtilityFunction<T>,
}

/// One cell: the UEs it serves, its bandwidth `R` and the solver settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<T> {
    pub ues: Vec<Ue<T>>,
    pub bandwidth: T,
    pub params: SolverParams<T>,
}

impl<T: Scalar> Scenario<T> {
    /// Builds a scenario with ids `1..=M` in the given order.
    pub fn new(utilities: Vec<UtilityFunction<T>>, bandwidth: T, params: SolverParams<T>) -> Result<Self> {
        let ues = utilities
            .into_iter()
            .enumerate()
            .map(|(i, utility)| Ue { id: i as u32 + 1, utility })
            .collect();
        let s = Scenario { ues, bandwidth, params };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ues.is_empty() {
            return Err(Error::InvalidScenario("at least one UE is required".into()));
        }
        for (i, ue) in self.ues.iter().enumerate() {
            if ue.id as usize != i + 1 {
                return Err(Error::InvalidScenario(format!(
                    "ue ids must run 1..={} in order, found id {} at position {}",
                    self.ues.len(),
                    ue.id,
                    i + 1
                )));
            }
            ue.utility
                .validate()
                .map_err(|e| Error::InvalidScenario(format!("ue {}: {e}", ue.id)))?;
        }
        if !(self.bandwidth.is_finite() && self.bandwidth >= T::from_count(self.ues.len())) {
            return Err(Error::InvalidScenario(format!(
                "bandwidth R = {} must be finite and at least the UE count {}",
                self.bandwidth,
                self.ues.len()
            )));
        }
        self.params.validate()
    }

    pub fn len(&self) -> usize {
        self.ues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ues.is_empty()
    }

    pub fn utilities(&self) -> Vec<UtilityFunction<T>> {
        self.ues.iter().map(|ue| ue.utility).collect()
    }

    pub fn with_bandwidth(&self, bandwidth: T) -> Self {
        Scenario {
            bandwidth,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep<T> {
    pub price: T,
    /// Bids the price was computed from.
    pub bids: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousAllocation<T> {
    pub rates: Vec<T>,
    pub bids: Vec<T>,
    pub price: T,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Vec<TraceStep<T>>,
}

impl<T: Scalar> ContinuousAllocation<T> {
    pub fn total_bid(&self) -> T {
        self.bids.iter().fold(T::zero(), |acc, &w| acc + w)
    }
}

/// The UE's rate at price `p`.
pub fn ue_rate_response<T: Scalar>(u: &UtilityFunction<T>, p: T) -> Result<T> {
    u.inverse_slope(p)
}

/// One UE's bid for round `n >= 1`: the bid buying its best-response rate at
/// `p`, moved at most `damping.window(n)` away from `prev_bid`.
pub fn ue_bid_update<T: Scalar>(
    prev_bid: T,
    p: T,
    u: &UtilityFunction<T>,
    n: usize,
    params: &SolverParams<T>,
) -> Result<T> {
    if n == 0 {
        return Err(Error::Domain {
            what: "iteration",
            value: 0.0,
        });
    }
    let raw = p * ue_rate_response(u, p)?;
    Ok(clamp_bid(prev_bid, raw, params.damping.window(n)))
}

fn clamp_bid<T: Scalar>(prev: T, raw: T, window: T) -> T {
    let step = raw - prev;
    if step.abs() > window {
        prev + step.signum() * window
    } else {
        raw
    }
}

/// Shadow price `sum(bids) / R`.
pub fn enb_price_update<T: Scalar>(bids: &[T], bandwidth: T) -> Result<T> {
    if !(bandwidth > T::zero()) {
        return Err(Error::Domain {
            what: "bandwidth",
            value: bandwidth.to_f64().unwrap_or(f64::NAN),
        });
    }
    if let Some(&w) = bids.iter().find(|&&w| !(w >= T::zero()) || w.is_infinite()) {
        return Err(Error::Domain {
            what: "bid",
            value: w.to_f64().unwrap_or(f64::NAN),
        });
    }
    let sum = bids.iter().fold(T::zero(), |acc, &w| acc + w);
    if sum <= T::zero() {
        return Err(Error::DegeneratePrice {
            sum: sum.to_f64().unwrap_or(0.0),
        });
    }
    Ok(sum / bandwidth)
}

/// Runs synchronous bid/price rounds until the bids settle or
/// `max_iters` rounds have been spent. Running out of rounds is reported
/// through `converged = false`, not as an error.
pub fn solve_continuous<T: Scalar>(s: &Scenario<T>) -> Result<ContinuousAllocation<T>> {
    s.validate()?;
    let params = &s.params;
    let mut bids = vec![params.w_init; s.len()];
    let mut trace = Vec::with_capacity(params.max_iters);
    let mut converged = false;
    let mut iterations = 0;

    for n in 1..=params.max_iters {
        iterations = n;
        let price = enb_price_update(&bids, s.bandwidth)?;
        let next = s
            .ues
            .iter()
            .zip(&bids)
            .map(|(ue, &w)| ue_bid_update(w, price, &ue.utility, n, params))
            .collect::<Result<Vec<_>>>()?;
        trace.push(TraceStep {
            price,
            bids: std::mem::replace(&mut bids, next),
        });
        let moved = trace[n - 1]
            .bids
            .iter()
            .zip(&bids)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max);
        if moved < params.delta {
            converged = true;
            break;
        }
    }

    let price = enb_price_update(&bids, s.bandwidth)?;
    let rates = bids.iter().map(|&w| w / price).collect();
    Ok(ContinuousAllocation {
        rates,
        bids,
        price,
        iterations,
        converged,
        trace,
    })
}
