//! Bandwidth sweeps: one full allocation per eNB rate `R`.

use std::time::Instant;

use rayon::prelude::*;
use rballoc::{allocate, solve_continuous, Error, Scenario64};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub bandwidth: f64,
    /// Continuous rates, ordered by UE id. Empty if the continuous stage failed.
    pub rates: Vec<f64>,
    pub bids: Vec<f64>,
    /// Chosen RB vector (first maximizer). `None` when the row carries an error.
    pub rbs: Option<Vec<u32>>,
    pub converged: bool,
    pub error: Option<String>,
    /// Seconds spent on this row; 0 when timing is disabled.
    pub wall_time: f64,
}

impl SweepRow {
    pub fn total_bid(&self) -> f64 {
        self.bids.iter().sum()
    }
}

/// The swept values `start, start + step, ...` up to and including `end`.
pub fn sweep_points(start: f64, end: f64, step: f64) -> Vec<f64> {
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    (0..count).map(|i| start + i as f64 * step).collect()
}

/// Allocates at every swept `R`. Rows come back in ascending `R` even though
/// they are computed in parallel. Per-row allocation failures are recorded
/// in the row; only bad sweep arguments are errors.
pub fn run_sweep(
    s: &Scenario64,
    start: f64,
    end: f64,
    step: f64,
    timing: bool,
) -> Result<Vec<SweepRow>, Error> {
    let m = s.len() as f64;
    if !(start.is_finite() && start >= m) {
        return Err(Error::InvalidScenario(format!(
            "sweep start {start} must be at least the UE count {m}"
        )));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidScenario(format!("sweep step {step} must be > 0")));
    }
    if !(end.is_finite() && end >= start) {
        return Err(Error::InvalidScenario(format!(
            "sweep end {end} must not be below start {start}"
        )));
    }
    Ok(sweep_points(start, end, step)
        .into_par_iter()
        .map(|r| sweep_row(&s.with_bandwidth(r), timing))
        .collect())
}

fn sweep_row(s: &Scenario64, timing: bool) -> SweepRow {
    let clock = Instant::now();
    let outcome = allocate(s);
    let wall_time = if timing { clock.elapsed().as_secs_f64() } else { 0.0 };
    match outcome {
        Ok(a) => SweepRow {
            bandwidth: s.bandwidth,
            rbs: Some(a.maximizers[0].rb.rbs().to_vec()),
            rates: a.continuous.rates,
            bids: a.continuous.bids,
            converged: a.continuous.converged,
            error: None,
            wall_time,
        },
        Err(e) => {
            // keep whatever the continuous stage produced
            let continuous = solve_continuous(s).ok();
            SweepRow {
                bandwidth: s.bandwidth,
                rates: continuous.as_ref().map(|c| c.rates.clone()).unwrap_or_default(),
                bids: continuous.as_ref().map(|c| c.bids.clone()).unwrap_or_default(),
                rbs: None,
                converged: continuous.is_some_and(|c| c.converged),
                error: Some(e.to_string()),
                wall_time,
            }
        }
    }
}
