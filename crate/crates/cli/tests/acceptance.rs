//! Acceptance criteria, one line of output each.
//!
//! Runs with `cargo test -p rballoc-cli --test acceptance`; exits non-zero if
//! any criterion fails.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rballoc::{
    allocate, allocate_with, brute_force_discrete, brute_force_restricted, Scenario64,
    SolverParams64, Utility64, UtilityFunction,
};
use rballoc_cli::output::{write_complexity_csv, write_pool_csv, write_sweep_csv};
use rballoc_cli::{load_scenario, report_complexity, run_sweep, SweepRow};

const REFERENCE_RATES: [f64; 6] = [11.57, 21.57, 33.58, 7.72, 10.36, 15.21];
const REFERENCE_RBS: [[u32; 6]; 7] = [
    [11, 21, 33, 8, 11, 16],
    [11, 21, 33, 8, 11, 15],
    [11, 21, 33, 8, 10, 16],
    [11, 21, 33, 8, 10, 15],
    [11, 21, 33, 7, 11, 16],
    [11, 21, 33, 7, 10, 16],
    [11, 21, 33, 7, 10, 15],
];
const RATE_TOL: f64 = 0.2;
const INFLECTIONS: [f64; 3] = [10.0, 20.0, 30.0];
const INFLECTION_TOL: f64 = 0.3;
const BID_SLACK: f64 = 0.01;

fn reference_file() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/paper_fig3.scenario")
}

fn reference_cell(bandwidth: f64) -> Scenario64 {
    load_scenario(reference_file()).unwrap().with_bandwidth(bandwidth)
}

fn full_sweep() -> (Vec<SweepRow>, Duration) {
    let clock = Instant::now();
    let rows = run_sweep(&reference_cell(100.0), 50.0, 100.0, 1.0, true).unwrap();
    (rows, clock.elapsed())
}

type Outcome = Result<String, String>;

fn within(elapsed: Duration, limit: f64, what: &str) -> Result<(), String> {
    let secs = elapsed.as_secs_f64();
    if secs < limit {
        Ok(())
    } else {
        Err(format!("{what} took {secs:.3}s, limit {limit}s"))
    }
}

fn c1_continuous_rates() -> Outcome {
    let clock = Instant::now();
    let a = allocate(&reference_cell(100.0)).map_err(|e| e.to_string())?;
    within(clock.elapsed(), 1.0, "allocation")?;
    let rates = &a.continuous.rates;
    let worst = rates
        .iter()
        .zip(REFERENCE_RATES)
        .map(|(r, t)| (r - t).abs())
        .fold(0.0, f64::max);
    let shown: Vec<String> = rates.iter().map(|r| format!("{r:.3}")).collect();
    let msg = format!("rates [{}], max deviation {worst:.3} (tol {RATE_TOL})", shown.join(", "));
    if worst <= RATE_TOL {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// ln U from the textbook closed forms, independent of the library's
/// log-domain evaluation.
fn plain_log_utility(u: &Utility64, r: f64) -> f64 {
    match *u {
        UtilityFunction::Sigmoidal { a, b } => {
            let eab = (a * b).exp();
            let c = (1.0 + eab) / eab;
            let d = 1.0 / (1.0 + eab);
            (c * (1.0 / (1.0 + (-a * (r - b)).exp()) - d)).ln()
        }
        UtilityFunction::Logarithmic { k, r_max } => {
            ((1.0 + k * r).ln() / (1.0 + k * r_max).ln()).ln()
        }
    }
}

/// Strict maximizer over every floor/ceil combination with total <= R.
fn enumerate_boundary(rates: &[f64], utilities: &[Utility64], bandwidth: f64) -> (Vec<u32>, usize) {
    let m = rates.len();
    let mut best: Option<(f64, Vec<u32>)> = None;
    for mask in 0..(1u32 << m) {
        let v: Vec<u32> = (0..m)
            .map(|i| {
                let x = if mask >> (m - 1 - i) & 1 == 1 { rates[i].ceil() } else { rates[i].floor() };
                (x as u32).max(1)
            })
            .collect();
        if f64::from(v.iter().sum::<u32>()) > bandwidth {
            continue;
        }
        let score: f64 = v.iter().zip(utilities).map(|(&n, u)| plain_log_utility(u, f64::from(n))).sum();
        if best.as_ref().is_none_or(|(b, _)| score > *b) {
            best = Some((score, v));
        }
    }
    (best.unwrap().1, 1 << m)
}

fn c2_discrete_containment() -> Outcome {
    let s = reference_cell(100.0);
    let clock = Instant::now();
    let a = allocate_with(&s, 0.0).map_err(|e| e.to_string())?;
    within(clock.elapsed(), 1.0, "allocation")?;
    let pool: BTreeSet<Vec<u32>> = a.feasible_pool.iter().map(|c| c.rb.rbs().to_vec()).collect();
    let missing: Vec<_> = REFERENCE_RBS.iter().filter(|v| !pool.iter().any(|p| p[..] == v[..])).collect();
    if !missing.is_empty() {
        return Err(format!("feasible pool lacks {missing:?}"));
    }
    if a.maximizers.len() != 1 {
        return Err(format!("{} strict maximizers, expected 1", a.maximizers.len()));
    }
    let chosen = a.maximizers[0].rb.rbs().to_vec();
    let (enumerated, count) = enumerate_boundary(&a.continuous.rates, &s.utilities(), s.bandwidth);
    if count != 64 || enumerated != chosen {
        return Err(format!("maximizer {chosen:?} but {count}-candidate enumeration gives {enumerated:?}"));
    }
    let msg = format!("all 7 listed vectors in pool of {}; strict maximizer {chosen:?}", pool.len());
    if REFERENCE_RBS.iter().any(|v| v.as_slice() == chosen.as_slice()) {
        Ok(msg)
    } else {
        Err(format!("{msg} is not one of the listed vectors"))
    }
}

fn c3_no_drop(rows: &[SweepRow], elapsed: Duration) -> Outcome {
    within(elapsed, 30.0, "sweep")?;
    if rows.len() != 51 {
        return Err(format!("{} rows, expected 51", rows.len()));
    }
    let slowest = rows.iter().map(|r| r.wall_time).fold(0.0, f64::max);
    if slowest >= 0.5 {
        return Err(format!("slowest allocation {slowest:.3}s, limit 0.5s"));
    }
    for r in rows {
        match &r.rbs {
            None => return Err(format!("R = {}: {}", r.bandwidth, r.error.as_deref().unwrap_or("no RBs"))),
            Some(rbs) if rbs.iter().any(|&n| n < 1) => {
                return Err(format!("R = {}: zero RB in {rbs:?}", r.bandwidth))
            }
            Some(_) => {}
        }
    }
    Ok(format!("51 rows, all RBs >= 1, sweep {:.3}s, slowest row {slowest:.4}s", elapsed.as_secs_f64()))
}

fn c4_qos_priority(rows: &[SweepRow]) -> Outcome {
    let mut short = Vec::new();
    for r in rows.iter().filter(|r| r.bandwidth >= 61.0) {
        for (i, &b) in INFLECTIONS.iter().enumerate() {
            if r.rates[i] < b - INFLECTION_TOL {
                short.push(format!("R={} UE{}={:.3}", r.bandwidth, i + 1, r.rates[i]));
            }
        }
    }
    if short.is_empty() {
        Ok(format!("{} rows checked", rows.iter().filter(|r| r.bandwidth >= 61.0).count()))
    } else {
        Err(format!("below inflection - {INFLECTION_TOL}: {}", short.join(", ")))
    }
}

fn c5_bid_monotonicity(rows: &[SweepRow]) -> Outcome {
    let converged: Vec<&SweepRow> = rows.iter().filter(|r| r.converged).collect();
    if converged.len() < 2 {
        return Err(format!("only {} converged rows", converged.len()));
    }
    for w in converged.windows(2) {
        let (prev, next) = (w[0].total_bid(), w[1].total_bid());
        if next > prev * (1.0 + BID_SLACK) {
            return Err(format!(
                "total bid rose from {prev:.5} (R={}) to {next:.5} (R={})",
                w[0].bandwidth, w[1].bandwidth
            ));
        }
    }
    Ok(format!("{} converged rows, total bid non-increasing within 1%", converged.len()))
}

fn random_utility(rng: &mut ChaCha8Rng) -> Utility64 {
    if rng.gen_bool(0.5) {
        Utility64::sigmoidal(rng.gen_range(0.5..5.0), rng.gen_range(2.0..15.0)).unwrap()
    } else {
        Utility64::logarithmic(rng.gen_range(0.2..15.0), rng.gen_range(50.0..150.0)).unwrap()
    }
}

fn c6_oracle_equivalence() -> Outcome {
    let clock = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 10 {
        attempts += 1;
        if attempts > 200 {
            return Err("could not draw 10 allocatable scenarios".into());
        }
        let m = rng.gen_range(2..=3);
        let utilities = (0..m).map(|_| random_utility(&mut rng)).collect();
        let bandwidth = f64::from(rng.gen_range(2 * m..=40));
        let s = Scenario64::new(utilities, bandwidth, SolverParams64::default()).map_err(|e| e.to_string())?;
        let Ok(a) = allocate_with(&s, 0.0) else { continue };
        let boundary = &a.maximizers[0];
        let grid = a.continuous.rates.iter().map(|r| r.ceil() as u32).max().unwrap().max(bandwidth as u32);
        let restricted = brute_force_restricted(&s, grid, &a.continuous.rates).map_err(|e| e.to_string())?;
        if &restricted.best != boundary {
            return Err(format!(
                "scenario {checked}: restricted oracle {:?} vs boundary {:?}",
                restricted.best.rb.rbs(),
                boundary.rb.rbs()
            ));
        }
        let full = brute_force_discrete(&s, grid).map_err(|e| e.to_string())?;
        if full.best.log_utility < boundary.log_utility {
            return Err(format!("scenario {checked}: full grid below boundary maximizer"));
        }
        checked += 1;
    }
    within(clock.elapsed(), 60.0, "oracle comparison")?;
    Ok(format!("10 scenarios agree ({:.3}s)", clock.elapsed().as_secs_f64()))
}

fn c7_utility_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let h = 1e-5;
    for i in 0..1000 {
        let u = random_utility(&mut rng);
        let r_max = match u {
            UtilityFunction::Logarithmic { r_max, .. } => r_max,
            UtilityFunction::Sigmoidal { .. } => 100.0,
        };
        let r1 = rng.gen_range(0.0..90.0);
        let r2 = r1 + rng.gen_range(1e-3..10.0);
        let fail = |what: &str| Err(format!("sample {i} {u:?} r1={r1} r2={r2}: {what}"));
        let (v1, v2) = (u.eval(r1).unwrap(), u.eval(r2).unwrap());
        if !(v1 <= v2 && u.log_eval(r1).unwrap() < u.log_eval(r2).unwrap()) {
            return fail("not increasing");
        }
        // the logarithmic family passes 1 beyond r_max by construction
        let bounded = |r: f64, v: f64| r > r_max || (0.0..=1.0).contains(&v);
        if !bounded(r1, v1) || !bounded(r2, v2) {
            return fail("out of [0, 1]");
        }
        if r1 > 0.0 && u.log_slope(r1).unwrap() < u.log_slope(r2).unwrap() {
            return fail("log-slope increased");
        }
        let r = rng.gen_range(1.0..90.0);
        let fd = (u.eval(r + h).unwrap().ln() - u.eval(r - h).unwrap().ln()) / (2.0 * h);
        let slope = u.log_slope(r).unwrap();
        if (slope - fd).abs() > 1e-5 {
            return Err(format!("sample {i} {u:?} r={r}: slope {slope} vs finite difference {fd}"));
        }
    }
    Ok("1000 samples: monotone, bounded, log-concave, slope matches finite difference".into())
}

fn c8_inverse_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let u = random_utility(&mut rng);
        // interior of the slope range over the rate bracket
        let hi = u.log_slope(0.5).unwrap().ln();
        let lo = u.log_slope(95.0).unwrap().ln();
        let p = rng.gen_range(lo..hi).exp();
        let back = u.log_slope(u.inverse_slope(p).unwrap()).unwrap();
        let rel = (back - p).abs() / p;
        worst = worst.max(rel);
        if rel > 1e-6 {
            return Err(format!("sample {i} {u:?} p={p}: relative error {rel:e}"));
        }
    }
    Ok(format!("1000 samples, worst relative error {worst:.2e}"))
}

fn c9_complexity() -> Outcome {
    let row = &report_complexity(100..=100, 10)[0];
    let ten_pow = format!("1{}", "0".repeat(100));
    let two_pow = "1267650600228229401496703205376";
    let mut csv = Vec::new();
    write_complexity_csv(&mut csv, std::slice::from_ref(row)).map_err(|e| e.to_string())?;
    let csv = String::from_utf8(csv).unwrap();
    let expected_prefix = format!("100,{ten_pow},{two_pow},");
    if row.full != ten_pow.parse::<BigUint>().unwrap()
        || row.boundary != two_pow.parse::<BigUint>().unwrap()
        || !csv.lines().nth(1).is_some_and(|l| l.starts_with(&expected_prefix))
    {
        return Err(format!("got ({}, {})", row.full, row.boundary));
    }
    Ok("M=100, n=10 -> (10^100, 2^100) exactly".into())
}

fn cli_outputs(dir: &std::path::Path, tag: &str) -> Result<Vec<Vec<u8>>, String> {
    let bin = env!("CARGO_BIN_EXE_rballoc");
    let scenario = reference_file();
    let alloc = dir.join(format!("alloc-{tag}.csv"));
    let sweep = dir.join(format!("sweep-{tag}.csv"));
    let runs: [Vec<String>; 2] = [
        vec![
            "allocate".into(),
            "--scenario".into(),
            scenario.display().to_string(),
            "--rate".into(),
            "100".into(),
            "--pool".into(),
            "all".into(),
            "--out".into(),
            alloc.display().to_string(),
        ],
        vec![
            "sweep".into(),
            "--scenario".into(),
            scenario.display().to_string(),
            "--from".into(),
            "50".into(),
            "--to".into(),
            "100".into(),
            "--step".into(),
            "1".into(),
            "--no-timing".into(),
            "--out".into(),
            sweep.display().to_string(),
        ],
    ];
    for args in &runs {
        let status = Command::new(bin).args(args).output().map_err(|e| e.to_string())?.status;
        if !status.success() {
            return Err(format!("rballoc {} exited with {status}", args[0]));
        }
    }
    // library-side writers too
    let s = reference_cell(100.0);
    let mut pool = Vec::new();
    write_pool_csv(&mut pool, &allocate(&s).map_err(|e| e.to_string())?, false).map_err(|e| e.to_string())?;
    let mut rows = Vec::new();
    let sweep_rows = run_sweep(&s, 50.0, 100.0, 1.0, false).map_err(|e| e.to_string())?;
    write_sweep_csv(&mut rows, &sweep_rows, s.len()).map_err(|e| e.to_string())?;
    Ok(vec![
        std::fs::read(alloc).map_err(|e| e.to_string())?,
        std::fs::read(sweep).map_err(|e| e.to_string())?,
        pool,
        rows,
    ])
}

fn c10_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let first = cli_outputs(dir.path(), "a")?;
    let second = cli_outputs(dir.path(), "b")?;
    if first != second {
        return Err("outputs differ between runs".into());
    }
    if first[0] != first[2] || first[1] != first[3] {
        return Err("CLI output differs from library output".into());
    }
    Ok(format!(
        "allocate ({} bytes) and sweep ({} bytes) CSVs byte-identical across runs",
        first[0].len(),
        first[1].len()
    ))
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() {
    let (rows, sweep_time) = full_sweep();
    let criteria: Vec<(&str, Criterion<'_>)> = vec![
        ("1 continuous rates at R=100", Box::new(c1_continuous_rates)),
        ("2 discrete pool containment", Box::new(c2_discrete_containment)),
        ("3 no UE dropped over sweep", Box::new(|| c3_no_drop(&rows, sweep_time))),
        ("4 real-time flows reach inflection", Box::new(|| c4_qos_priority(&rows))),
        ("5 total bid falls with R", Box::new(|| c5_bid_monotonicity(&rows))),
        ("6 oracle restriction equivalence", Box::new(c6_oracle_equivalence)),
        ("7 utility properties", Box::new(c7_utility_properties)),
        ("8 inverse slope round trip", Box::new(c8_inverse_round_trip)),
        ("9 complexity counts", Box::new(c9_complexity)),
        ("10 deterministic output", Box::new(c10_determinism)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        match check() {
            Ok(msg) => println!("[PASS] criterion {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] criterion {name}: {msg}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
