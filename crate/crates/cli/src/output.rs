//! CSV emitters. Every file has a header row, ',' as delimiter and '.' as
//! decimal separator; reals are printed with 17 significant digits so they
//! read back bit-exactly.

use std::io::{Read, Write};

use rballoc::{AllocationResult64, OracleResult64, ScoredRbVector64};

use crate::report::ComplexityRow;
use crate::sweep::SweepRow;

pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn numbered(prefix: &str, m: usize) -> impl Iterator<Item = String> + '_ {
    (1..=m).map(move |i| format!("{prefix}_{i}"))
}

fn cells<T>(values: &[T], m: usize, f: impl Fn(&T) -> String) -> Vec<String> {
    if values.is_empty() {
        vec![String::new(); m]
    } else {
        values.iter().map(f).collect()
    }
}

pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow], ues: usize) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["R".to_string()];
    header.extend(numbered("rate", ues));
    header.extend(numbered("bid", ues));
    header.extend(numbered("rb", ues));
    header.extend(["converged", "error", "wall_time_s"].map(String::from));
    w.write_record(&header)?;
    for row in rows {
        let mut rec = vec![real(row.bandwidth)];
        rec.extend(cells(&row.rates, ues, |&v| real(v)));
        rec.extend(cells(&row.bids, ues, |&v| real(v)));
        rec.extend(cells(row.rbs.as_deref().unwrap_or(&[]), ues, u32::to_string));
        rec.push(row.converged.to_string());
        rec.push(row.error.clone().unwrap_or_default());
        rec.push(real(row.wall_time));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a file written by [`write_sweep_csv`].
pub fn read_sweep_csv<R: Read>(input: R) -> Result<Vec<SweepRow>, String> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(|e| e.to_string())?.clone();
    let ues = header.iter().filter(|h| h.starts_with("rate_")).count();
    if header.len() != 3 * ues + 4 {
        return Err(format!("unexpected sweep header with {} columns", header.len()));
    }
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let bad = |col: usize| format!("row {}: bad value in column {}", line + 1, &header[col]);
        let real_at = |col: usize| rec[col].parse::<f64>().map_err(|_| bad(col));
        let block = |start: usize| -> Result<Vec<f64>, String> {
            if rec[start].is_empty() {
                return Ok(Vec::new());
            }
            (start..start + ues).map(real_at).collect()
        };
        let rb_start = 1 + 2 * ues;
        let rbs = if rec[rb_start].is_empty() {
            None
        } else {
            Some(
                (rb_start..rb_start + ues)
                    .map(|c| rec[c].parse::<u32>().map_err(|_| bad(c)))
                    .collect::<Result<Vec<_>, _>>()?,
            )
        };
        let tail = rb_start + ues;
        rows.push(SweepRow {
            bandwidth: real_at(0)?,
            rates: block(1)?,
            bids: block(1 + ues)?,
            rbs,
            converged: rec[tail].parse::<bool>().map_err(|_| bad(tail))?,
            error: Some(rec[tail + 1].to_string()).filter(|e| !e.is_empty()),
            wall_time: real_at(tail + 2)?,
        });
    }
    Ok(rows)
}

/// Feasible pool (or only the maximizers) of one allocation.
pub fn write_pool_csv<W: Write>(out: W, result: &AllocationResult64, only_max: bool) -> csv::Result<()> {
    let ues = result.continuous.rates.len();
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = numbered("rb", ues).collect();
    header.extend(["total", "log_utility", "maximizer"].map(String::from));
    w.write_record(&header)?;
    let rows: &[ScoredRbVector64] = if only_max {
        &result.maximizers
    } else {
        &result.feasible_pool
    };
    for c in rows {
        let mut rec: Vec<String> = c.rb.rbs().iter().map(u32::to_string).collect();
        rec.push(c.rb.total().to_string());
        rec.push(real(c.log_utility));
        rec.push(result.maximizers.contains(c).to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_complexity_csv<W: Write>(out: W, rows: &[ComplexityRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["M", "full", "boundary", "log10_full", "log10_boundary"])?;
    for r in rows {
        w.write_record([
            r.ues.to_string(),
            r.full.to_string(),
            r.boundary.to_string(),
            real(r.log10_full),
            real(r.log10_boundary),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Full-grid optimum next to the boundary-mapping choice.
pub fn write_oracle_csv<W: Write>(
    out: W,
    oracle: &OracleResult64,
    boundary: Option<&ScoredRbVector64>,
) -> csv::Result<()> {
    let ues = oracle.best.rb.len();
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["source".to_string()];
    header.extend(numbered("rb", ues));
    header.extend(["total", "log_utility", "evaluated"].map(String::from));
    w.write_record(&header)?;
    let mut emit = |source: &str, c: &ScoredRbVector64, evaluated: String| {
        let mut rec = vec![source.to_string()];
        rec.extend(c.rb.rbs().iter().map(u32::to_string));
        rec.push(c.rb.total().to_string());
        rec.push(real(c.log_utility));
        rec.push(evaluated);
        w.write_record(&rec)
    };
    emit("oracle", &oracle.best, oracle.evaluated_count.to_string())?;
    if let Some(b) = boundary {
        emit("boundary", b, String::new())?;
    }
    w.flush()?;
    Ok(())
}
