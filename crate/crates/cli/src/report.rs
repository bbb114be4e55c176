//! Candidate-count comparison between full per-UE search and boundary mapping.

use num_bigint::BigUint;
use rballoc::complexity_count;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityRow {
    pub ues: u32,
    pub full: BigUint,
    pub boundary: BigUint,
    pub log10_full: f64,
    pub log10_boundary: f64,
}

/// One row per UE count in `ues`, for `per_ue` candidate values per UE.
pub fn report_complexity(ues: std::ops::RangeInclusive<u32>, per_ue: u32) -> Vec<ComplexityRow> {
    ues.map(|m| {
        let (full, boundary) = complexity_count(m, per_ue);
        ComplexityRow {
            ues: m,
            full,
            boundary,
            log10_full: f64::from(m) * f64::from(per_ue).log10(),
            log10_boundary: f64::from(m) * 2f64.log10(),
        }
    })
    .collect()
}
