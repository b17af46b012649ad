//! Exhaustive search of the admissible parameter space.
//!
//! For each dimension `M` and each sorted degree vector with `Σ d_i = M + k`,
//! multiplicity vectors are generated position by position. The dimension
//! inequality only grows as entries are added, so a partial vector that
//! already violates it is abandoned along with all its completions. Work is
//! split by `(M, d)` and merged back in lexicographic order, which makes the
//! output independent of the number of workers.

use crate::arith::{int_json, render_rational, Verdict};
use crate::codim::assemble_codim_report;
use crate::hypertangent::{build_schedule, certify_exclusion, ratio_chain, slope_product};
use crate::params::{
    check_dimension_inequality, check_main_inequality, mu_over_d, validate_shape, DegreeVector, RigidityParams,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::Path;
use thiserror::Error;

/// Default limit on the number of candidate tuples.
pub const DEFAULT_CAP: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum ExploreError {
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("projected enumeration of {projected} candidate tuples exceeds the cap {cap}")]
    Resource { projected: u128, cap: u64 },
    #[error("internal error: {0}")]
    Internal(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExploreConfig {
    pub cap: u64,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl Default for ExploreConfig {
    fn default() -> Self {
        ExploreConfig {
            cap: DEFAULT_CAP,
            workers: None,
        }
    }
}

/// Runs `f` on a dedicated pool of `workers` threads, or on the global pool.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, String> {
    match workers {
        None => Ok(f()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| e.to_string()),
    }
}

/// An admissible tuple with everything computed about it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleRecord {
    pub params: RigidityParams,
    pub mu_over_d: BigRational,
    pub m_total: u64,
    pub final_bound: BigRational,
    /// `Π β_i · μ = d`.
    pub telescoping_ok: bool,
    pub exclusion_ok: bool,
    pub all_codim_ok: bool,
    pub main_inequality: Verdict,
    pub dimension_inequality: Verdict,
}

impl AdmissibleRecord {
    /// Computes the record, or `None` if either inequality fails.
    pub fn evaluate(params: RigidityParams) -> Result<Option<Self>, ExploreError> {
        let main = check_main_inequality(&params);
        let dimension = check_dimension_inequality(&params);
        if !main.holds || !dimension.holds {
            return Ok(None);
        }
        let schedule = build_schedule(&params);
        let telescoping_ok = slope_product(&schedule) * BigRational::from_integer(BigInt::from(params.mu().clone()))
            == BigRational::from_integer(BigInt::from(params.deg_v().clone()));
        let chain = ratio_chain(&params, &schedule);
        let certificate = certify_exclusion(&chain);
        let report = assemble_codim_report(&params).map_err(|e| ExploreError::Internal(e.to_string()))?;
        Ok(Some(AdmissibleRecord {
            mu_over_d: mu_over_d(&params),
            m_total: schedule.m_total(),
            final_bound: chain.final_bound,
            telescoping_ok,
            exclusion_ok: certificate.ok,
            all_codim_ok: report.certified,
            main_inequality: main,
            dimension_inequality: dimension,
            params,
        }))
    }

    pub fn passes_everything(&self) -> bool {
        self.telescoping_ok && self.exclusion_ok && self.all_codim_ok
    }

    fn sort_key(&self) -> (usize, u32, &[u32], &[u32]) {
        (
            self.params.k(),
            self.params.m(),
            self.params.degrees().as_slice(),
            self.params.multiplicities().as_slice(),
        )
    }
}

fn validate_ranges(k: usize, m_range: &RangeInclusive<u32>) -> Result<RangeInclusive<u32>, ExploreError> {
    if k < 2 {
        return Err(ExploreError::InvalidRange(format!("k must be at least 2 (got {k})")));
    }
    if m_range.start() > m_range.end() {
        return Err(ExploreError::InvalidRange(format!(
            "empty M range {}..={}",
            m_range.start(),
            m_range.end()
        )));
    }
    let floor = 2 * k as u32 + 1;
    Ok((*m_range.start()).max(floor)..=*m_range.end())
}

/// Work units in lexicographic order.
fn blocks(k: usize, m_range: RangeInclusive<u32>) -> Vec<(u32, Vec<u32>)> {
    m_range
        .flat_map(|m| DegreeVector::all_with_sum(k, u64::from(m) + k as u64).map(move |d| (m, d)))
        .collect()
}

/// Number of `(d, ξ)` pairs before any pruning, `Σ_d Π d_i`.
pub fn projected_size(k: usize, m_range: RangeInclusive<u32>) -> Result<u128, ExploreError> {
    Ok(box_volume(&blocks(k, validate_ranges(k, &m_range)?)))
}

fn box_volume(work: &[(u32, Vec<u32>)]) -> u128 {
    work.iter()
        .map(|(_, d)| d.iter().fold(1u128, |acc, &x| acc.saturating_mul(u128::from(x))))
        .fold(0u128, u128::saturating_add)
}

/// Every `ξ` with `1 ≤ ξ_i ≤ d_i` and `3 + Σ_{ξ_i ≥ 2} (ξ_i + 1) ≤ M`, in
/// lexicographic order.
fn pruned_multiplicities(d: &[u32], m: u32) -> Vec<Vec<u32>> {
    fn go(d: &[u32], budget: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let pos = cur.len();
        if pos == d.len() {
            out.push(cur.clone());
            return;
        }
        for x in 1..=d[pos] {
            let cost = if x >= 2 { i64::from(x) + 1 } else { 0 };
            if cost > budget {
                // Costs grow with x.
                break;
            }
            cur.push(x);
            go(d, budget - cost, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(d, i64::from(m) - 3, &mut Vec::with_capacity(d.len()), &mut out);
    out
}

fn block_records(k: usize, m: u32, d: &[u32]) -> Result<Vec<AdmissibleRecord>, ExploreError> {
    let mut out = Vec::new();
    for xi in pruned_multiplicities(d, m) {
        let params = validate_shape(k, m, d, &xi).map_err(|e| ExploreError::Internal(e.to_string()))?;
        if let Some(record) = AdmissibleRecord::evaluate(params)? {
            out.push(record);
        }
    }
    Ok(out)
}

/// All admissible tuples for one `k` over a range of `M`, sorted by
/// `(M, d, ξ)`. The lower end of the range is raised to `2k + 1`.
pub fn enumerate_admissible(
    k: usize,
    m_range: RangeInclusive<u32>,
    cfg: &ExploreConfig,
) -> Result<Vec<AdmissibleRecord>, ExploreError> {
    let work = blocks(k, validate_ranges(k, &m_range)?);
    let projected = box_volume(&work);
    if projected > u128::from(cfg.cap) {
        return Err(ExploreError::Resource {
            projected,
            cap: cfg.cap,
        });
    }
    let parts = with_workers(cfg.workers, || {
        work.par_iter()
            .map(|(m, d)| block_records(k, *m, d))
            .collect::<Result<Vec<_>, _>>()
    })
    .map_err(ExploreError::Internal)??;
    Ok(parts.into_iter().flatten().collect())
}

/// Aggregate statistics over a set of records.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveySummary {
    pub count: usize,
    /// Largest `μ / d` with its first witness.
    pub max_ratio: Option<(BigRational, RigidityParams)>,
    /// Smallest number of hypertangent divisors with its first witness.
    pub min_m: Option<(u64, RigidityParams)>,
    /// Records that pass both inequalities but fail a later check.
    pub failures: Vec<RigidityParams>,
    /// Largest `μ / d` at each `M`, in increasing `M`.
    pub max_ratio_by_m: Vec<(u32, BigRational)>,
    /// Whether [`Self::max_ratio_by_m`] never decreases.
    pub ratio_non_decreasing: bool,
    pub empty: bool,
}

pub fn summarize(records: &[AdmissibleRecord]) -> SurveySummary {
    let mut max_ratio: Option<(BigRational, RigidityParams)> = None;
    let mut min_m: Option<(u64, RigidityParams)> = None;
    let mut by_m: Vec<(u32, BigRational)> = Vec::new();
    let mut failures = Vec::new();
    let mut sorted: Vec<&AdmissibleRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.params.m().cmp(&b.params.m()).then(a.sort_key().cmp(&b.sort_key())));
    for r in sorted {
        if max_ratio.as_ref().is_none_or(|(best, _)| r.mu_over_d > *best) {
            max_ratio = Some((r.mu_over_d.clone(), r.params.clone()));
        }
        if min_m.as_ref().is_none_or(|(best, _)| r.m_total < *best) {
            min_m = Some((r.m_total, r.params.clone()));
        }
        match by_m.last_mut() {
            Some((m, best)) if *m == r.params.m() => {
                if r.mu_over_d > *best {
                    *best = r.mu_over_d.clone();
                }
            }
            _ => by_m.push((r.params.m(), r.mu_over_d.clone())),
        }
        if !r.passes_everything() {
            failures.push(r.params.clone());
        }
    }
    SurveySummary {
        count: records.len(),
        ratio_non_decreasing: by_m.windows(2).all(|w| w[0].1 <= w[1].1),
        max_ratio,
        min_m,
        failures,
        max_ratio_by_m: by_m,
        empty: records.is_empty(),
    }
}

/// Enumerates every `k` in `k_range` and summarizes the union.
pub fn survey(
    k_range: RangeInclusive<usize>,
    m_range: RangeInclusive<u32>,
    cfg: &ExploreConfig,
) -> Result<SurveySummary, ExploreError> {
    let mut all = Vec::new();
    for k in k_range {
        all.extend(enumerate_admissible(k, m_range.clone(), cfg)?);
    }
    Ok(summarize(&all))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown report format {other:?} (csv, json)")),
        }
    }
}

pub const CSV_COLUMNS: [&str; 14] = [
    "k",
    "M",
    "d",
    "xi",
    "c_star",
    "mu",
    "deg",
    "mu_over_d",
    "m_total",
    "final_bound",
    "eq1_lhs",
    "eq1_rhs",
    "eq2_ok",
    "codim_ok",
];

fn join(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn csv_row(r: &AdmissibleRecord) -> [String; 14] {
    let p = &r.params;
    [
        p.k().to_string(),
        p.m().to_string(),
        join(p.degrees().as_slice()),
        join(p.multiplicities().as_slice()),
        p.c_star().to_string(),
        p.mu().to_string(),
        p.deg_v().to_string(),
        render_rational(&r.mu_over_d),
        r.m_total.to_string(),
        render_rational(&r.final_bound),
        r.main_inequality.value.to_string(),
        r.main_inequality.threshold.to_string(),
        r.dimension_inequality.holds.to_string(),
        r.all_codim_ok.to_string(),
    ]
}

fn params_json(p: &RigidityParams) -> Value {
    json!({
        "k": p.k(),
        "M": p.m(),
        "d": p.degrees().as_slice(),
        "xi": p.multiplicities().as_slice(),
    })
}

fn record_json(r: &AdmissibleRecord) -> Value {
    let p = &r.params;
    json!({
        "k": p.k(),
        "M": p.m(),
        "d": p.degrees().as_slice(),
        "xi": p.multiplicities().as_slice(),
        "c_star": p.c_star(),
        "mu": int_json(&BigInt::from(p.mu().clone())),
        "deg": int_json(&BigInt::from(p.deg_v().clone())),
        "mu_over_d": render_rational(&r.mu_over_d),
        "m_total": r.m_total,
        "final_bound": render_rational(&r.final_bound),
        "eq1_lhs": int_json(&r.main_inequality.value),
        "eq1_rhs": int_json(&r.main_inequality.threshold),
        "eq2_ok": r.dimension_inequality.holds,
        "codim_ok": r.all_codim_ok,
    })
}

pub fn summary_json(s: &SurveySummary) -> Value {
    json!({
        "count": s.count,
        "empty": s.empty,
        "max_ratio": s.max_ratio.as_ref().map(|(r, p)| json!({"value": render_rational(r), "witness": params_json(p)})),
        "min_m": s.min_m.as_ref().map(|(m, p)| json!({"value": m, "witness": params_json(p)})),
        "failures": s.failures.iter().map(params_json).collect::<Vec<_>>(),
        "max_ratio_by_m": s.max_ratio_by_m.iter().map(|(m, r)| json!({"M": m, "max_ratio": render_rational(r)})).collect::<Vec<_>>(),
        "ratio_non_decreasing": s.ratio_non_decreasing,
    })
}

/// Writes the records, sorted by `(k, M, d, ξ)`, as CSV or as a JSON
/// document `{"records": [...], "summary": {...}}`.
pub fn export_report(
    records: &[AdmissibleRecord],
    format: ReportFormat,
    out: &mut dyn Write,
) -> Result<(), ExploreError> {
    let mut sorted: Vec<&AdmissibleRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_COLUMNS)?;
            for r in sorted {
                w.write_record(csv_row(r))?;
            }
            w.flush()?;
        }
        ReportFormat::Json => {
            let doc = json!({
                "records": sorted.iter().map(|r| record_json(r)).collect::<Vec<_>>(),
                "summary": summary_json(&summarize(records)),
            });
            let mut text = serde_json::to_string_pretty(&doc).map_err(|e| ExploreError::Internal(e.to_string()))?;
            text.push('\n');
            out.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

pub fn export_report_to_path(
    records: &[AdmissibleRecord],
    format: ReportFormat,
    path: &Path,
) -> Result<(), ExploreError> {
    let mut buf = Vec::new();
    export_report(records, format, &mut buf)?;
    std::fs::write(path, buf)?;
    Ok(())
}
