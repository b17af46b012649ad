//! Codimension counts showing that the non-regular tuples at a non-singular
//! point form a set of codimension at least `M + k + 1`.
//!
//! Everything here is integer bookkeeping. The restrictions to the
//! projectivized tangent space of the forms `Φ_{i,j}`, `2 ≤ j ≤ d_i`,
//! `(i, j) ≠ (k, d_k)`, give `M − 1` polynomials `p_1 … p_{M−1}` whose degrees
//! drive every estimate. The bad set splits into a "line" part, bounded by
//! [`line_case_check`], and the parts `ℬ_i`, bounded by [`projection_bound`]
//! for `i ≤ k` and by [`span_case_check`] for `i > k`.

use crate::arith::{binomial, Verdict};
use crate::params::{DegreeVector, RigidityParams};
use num_bigint::BigInt;
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CodimError {
    #[error("internal error: {0}")]
    Internal(String),
    #[error("index {index} out of range 1..={max}")]
    Index { index: usize, max: usize },
}

/// Degrees of `p_1, …, p_{M−1}`, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeMultiset(Vec<u32>);

impl DegreeMultiset {
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().map(|&d| i64::from(d)).sum()
    }
}

/// `{j : 2 ≤ j ≤ d_i}` over all `i`, minus one copy of `d_k`.
pub fn standard_degrees(p: &RigidityParams) -> Result<DegreeMultiset, CodimError> {
    let mut degrees: Vec<u32> = p.degrees().as_slice().iter().flat_map(|&d| 2..=d).collect();
    let last = p.degrees().last();
    let pos = degrees
        .iter()
        .rposition(|&j| j == last)
        .ok_or_else(|| CodimError::Internal("largest degree missing from the form list".into()))?;
    degrees.remove(pos);
    degrees.sort_unstable();
    let expected = p.m() as usize - 1;
    if degrees.len() != expected {
        return Err(CodimError::Internal(format!(
            "{} forms on the tangent space, expected M - 1 = {expected}",
            degrees.len()
        )));
    }
    Ok(DegreeMultiset(degrees))
}

fn sum_deg_of(d: &[u32]) -> i64 {
    let (last, rest) = d.split_last().expect("degree vectors are non-empty");
    let head: i64 = rest.iter().map(|&x| i64::from(x) * (i64::from(x) + 1) / 2).sum();
    let last = i64::from(*last);
    head + (last - 1) * last / 2 - d.len() as i64
}

/// `Σ deg p_i = Σ_{i<k} d_i(d_i+1)/2 + (d_k−1)d_k/2 − k`.
pub fn sum_deg(p: &RigidityParams) -> i64 {
    sum_deg_of(p.degrees().as_slice())
}

/// `Σ deg p_i ≥ 2M − 2`.
pub fn degree_sum_check(p: &RigidityParams) -> Verdict {
    Verdict::at_least(sum_deg(p), 2 * i64::from(p.m()) - 2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumDegMinimum {
    pub min_value: i64,
    /// Every degree vector attaining the minimum, in lexicographic order.
    pub argmin: Vec<DegreeVector>,
    /// The balanced vector: `M = ka + l` gives `k − l` entries `a + 1`
    /// followed by `l` entries `a + 2`.
    pub balanced: DegreeVector,
    pub balanced_attains: bool,
}

/// Balanced degree vector for `(k, M)`.
pub fn balanced_degrees(k: usize, m: u32) -> DegreeVector {
    let a = m / k as u32;
    let l = (m % k as u32) as usize;
    let mut v = vec![a + 1; k - l];
    v.extend(std::iter::repeat_n(a + 2, l));
    DegreeVector::new(v).expect("balanced vector is sorted with entries >= 2 when M >= k")
}

/// Exhaustive minimum of `Σ deg p_i` over every sorted degree vector with
/// `Σ d_i = M + k`.
pub fn minimize_sum_deg(k: usize, m: u32) -> SumDegMinimum {
    let mut min_value = i64::MAX;
    let mut argmin = Vec::new();
    for d in DegreeVector::all_with_sum(k, u64::from(m) + k as u64) {
        let value = sum_deg_of(&d);
        if value < min_value {
            min_value = value;
            argmin.clear();
        }
        if value == min_value {
            argmin.push(DegreeVector::new(d).expect("generator yields sorted vectors"));
        }
    }
    let balanced = balanced_degrees(k, m);
    let balanced_attains = argmin.contains(&balanced);
    SumDegMinimum {
        min_value,
        argmin,
        balanced,
        balanced_attains,
    }
}

/// Lines missing the tangent direction: `Σ deg p_i − M + 3 ≥ M + 1`.
pub fn b_minus_line_codim(p: &RigidityParams) -> Verdict {
    let m = i64::from(p.m());
    Verdict::at_least(sum_deg(p) - m + 3, m + 1)
}

/// Conditions `q_{i,j,α}(λ) = 0` for `ξ ≤ j ≤ d`, `0 ≤ α ≤ j`:
/// `½[(d+1)(d+2) − ξ(ξ+1)]`.
pub fn line_conditions(d: u32, xi: u32) -> i64 {
    let (d, xi) = (i64::from(d), i64::from(xi));
    ((d + 1) * (d + 2) - xi * (xi + 1)) / 2
}

/// Conditions from `Φ_{k,2} … Φ_{k,d_k−1}` vanishing on a line:
/// `½[d(d+1) − ξ(ξ+1)]`.
pub fn line_conditions_below_top(d: u32, xi: u32) -> i64 {
    let (d, xi) = (i64::from(d), i64::from(xi));
    (d * (d + 1) - xi * (xi + 1)) / 2
}

/// Lines through the tangent direction:
/// `½ Σ[(d_i+1)(d_i+2) − ξ_i(ξ_i+1)] − (d_k+1) − (M−2) ≥ M + 1 + c_* − k`.
/// This is the main admissibility inequality halved and rearranged.
pub fn b_plus_line_check(p: &RigidityParams) -> Verdict {
    let m = i64::from(p.m());
    let k = p.k() as i64;
    let conditions: i64 = p.pairs().map(|(d, xi)| line_conditions(d, xi)).sum();
    let value = conditions - (i64::from(p.degrees().last()) + 1) - (m - 2);
    Verdict::at_least(value, m + 1 + p.c_star() as i64 - k)
}

/// Codimension of the special union: `k + ♯{i : ξ_i ≤ d_i − 1} = 2k − c_*`.
pub fn special_union_codim(p: &RigidityParams) -> i64 {
    let non_cones = p.pairs().filter(|&(d, xi)| xi < d).count();
    (p.k() + non_cones) as i64
}

/// Linear-projection bound for `ℬ_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionBound {
    pub index: usize,
    pub degree: u32,
    /// `C(M − i − 1 + deg p_i, deg p_i)`.
    pub value: BigInt,
    /// `C(M − k + 1, 2)` when `i ≤ k`, where every `p_i` is a quadric.
    pub floor: Option<BigInt>,
}

pub fn projection_bound(p: &RigidityParams, i: usize) -> Result<ProjectionBound, CodimError> {
    let degrees = standard_degrees(p)?;
    let max = degrees.len();
    if i == 0 || i > max {
        return Err(CodimError::Index { index: i, max });
    }
    let degree = degrees.as_slice()[i - 1];
    let m = u64::from(p.m());
    let top = m - i as u64 - 1 + u64::from(degree);
    let value = BigInt::from(binomial(top, u64::from(degree)));
    let floor = (i <= p.k()).then(|| BigInt::from(binomial(m - p.k() as u64 + 1, 2)));
    Ok(ProjectionBound {
        index: i,
        degree,
        value,
        floor,
    })
}

/// `φ₁(t) = (2t+3)(M−1−t) − t(M−t)`.
pub fn phi1(t: i64, m: i64) -> i64 {
    (2 * t + 3) * (m - 1 - t) - t * (m - t)
}

/// `φ₂(t) = (M−t−1)(t+2) + 1`.
pub fn phi2(t: i64, m: i64) -> i64 {
    (m - t - 1) * (t + 2) + 1
}

/// Good-sequence bound `(2b+3)(M−1−b) − 2` for a fixed linear span of codimension `b`.
pub fn good_sequence_bound(b: i64, m: i64) -> i64 {
    (2 * b + 3) * (m - 1 - b) - 2
}

/// `codim ℬ_{i,b} ≥ good_sequence_bound(b) − b(M − b)`, the span varying in a
/// Grassmannian of dimension `b(M − b)`.
fn bound_for_span(b: i64, m: i64) -> i64 {
    good_sequence_bound(b, m) - b * (m - b)
}

/// Range of the span codimension `b` for `ℬ_i`. For `i = M − 1` the value
/// `b = M − 2` belongs to the line case and is excluded.
pub fn span_codim_range(i: usize, m: u32) -> std::ops::RangeInclusive<i64> {
    let m = i64::from(m);
    let i = i as i64;
    if i <= m - 2 {
        0..=i - 1
    } else {
        0..=m - 3
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanCaseVerdict {
    pub index: usize,
    /// Minimum over `b` from the two endpoints of the (concave) range.
    pub closed_form: i64,
    /// Minimum over every integer `b` in range.
    pub brute_force: i64,
    /// `min{3M − 5, (M − i − 1)(i + 2) + 1}` for `i ≤ M − 2`.
    pub displayed: Option<i64>,
    pub verdict: Verdict,
}

impl SpanCaseVerdict {
    /// Closed form and brute force agree, and so does the displayed
    /// minimum where one is given.
    pub fn consistent(&self) -> bool {
        self.closed_form == self.brute_force && self.displayed.is_none_or(|d| d == self.closed_form)
    }
}

/// Bounds `codim ℬ_i ≥ M + 1` for `i = k + 1 … M − 1`.
pub fn span_case_check(p: &RigidityParams) -> Vec<SpanCaseVerdict> {
    let m = i64::from(p.m());
    (p.k() + 1..p.m() as usize)
        .map(|i| {
            let range = span_codim_range(i, p.m());
            let (lo, hi) = (*range.start(), *range.end());
            let closed_form = bound_for_span(lo, m).min(bound_for_span(hi, m));
            let brute_force = range.map(|b| bound_for_span(b, m)).min().expect("non-empty range");
            let displayed = (i as i64 <= m - 2).then(|| {
                let i = i as i64;
                (3 * m - 5).min((m - i - 1) * (i + 2) + 1)
            });
            SpanCaseVerdict {
                index: i,
                closed_form,
                brute_force,
                displayed,
                verdict: Verdict::at_least(brute_force.min(closed_form), m + 1),
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineCaseVerdict {
    pub minus: Verdict,
    pub plus: Verdict,
    /// `min(minus, plus)` against `M + 1 + c_* − k`.
    pub verdict: Verdict,
}

/// `codim ℬ_line ≥ M + 1 + c_* − k`, the smaller of the two line sub-cases.
pub fn line_case_check(p: &RigidityParams) -> LineCaseVerdict {
    let minus = b_minus_line_codim(p);
    let plus = b_plus_line_check(p);
    let value = (&minus.value).min(&plus.value).clone();
    let verdict = Verdict::at_least(value, plus.threshold.clone());
    LineCaseVerdict { minus, plus, verdict }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodimRecord {
    pub name: String,
    pub verdict: Verdict,
}

impl CodimRecord {
    fn new(name: impl Into<String>, verdict: Verdict) -> Self {
        CodimRecord {
            name: name.into(),
            verdict,
        }
    }
}

/// Every intermediate quantity behind the `M + k + 1` bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodimReport {
    pub records: Vec<CodimRecord>,
    /// Indices `i` whose span-case routes disagree; expected empty.
    pub span_case_divergences: Vec<usize>,
    pub certified: bool,
}

impl CodimReport {
    pub fn get(&self, name: &str) -> Option<&Verdict> {
        self.records.iter().find(|r| r.name == name).map(|r| &r.verdict)
    }
}

/// Assembles the full report.
///
/// The bad set inside one affine slice `𝒜` is the union of the line part and
/// the `ℬ_i`, so its codimension is at least the minimum of their bounds,
/// which must reach `M + 1 + c_* − k`. The special union adds `2k − c_*`,
/// and the two together must reach `M + k + 1`.
pub fn assemble_codim_report(p: &RigidityParams) -> Result<CodimReport, CodimError> {
    let m = i64::from(p.m());
    let k = p.k() as i64;
    let c_star = p.c_star() as i64;
    let slice_threshold = m + 1 + c_star - k;
    let mut records = Vec::new();

    let degrees = standard_degrees(p)?;
    let sd = sum_deg(p);
    if sd != degrees.sum() {
        return Err(CodimError::Internal(format!(
            "closed-form degree sum {sd} differs from direct sum {}",
            degrees.sum()
        )));
    }
    records.push(CodimRecord::new("sum_deg", Verdict::at_least(sd, 2 * m - 2)));

    let line = line_case_check(p);
    records.push(CodimRecord::new("b_minus_line", line.minus.clone()));
    records.push(CodimRecord::new("b_plus_line", line.plus.clone()));
    records.push(CodimRecord::new("line_case", line.verdict.clone()));

    let special = special_union_codim(p);
    records.push(CodimRecord::new("special_union", Verdict::at_least(special, k)));

    for (i, (d, xi)) in p.pairs().enumerate() {
        records.push(CodimRecord::new(
            format!("line_conditions[{}]", i + 1),
            Verdict::at_least(line_conditions(d, xi), i64::from(d) + 1),
        ));
    }
    let (dk, xik) = p.pairs().last().expect("k >= 1");
    records.push(CodimRecord::new(
        "line_conditions_below_top",
        Verdict::at_least(line_conditions_below_top(dk, xik), 0),
    ));

    let mut slice_bound: BigInt = line.verdict.value.clone();
    for i in 1..=p.k().min(degrees.len()) {
        let proj = projection_bound(p, i)?;
        slice_bound = slice_bound.min(proj.value.clone());
        records.push(CodimRecord::new(
            format!("projection[{i}]"),
            Verdict::at_least(proj.value, m + 1),
        ));
        if i == p.k() {
            let floor = proj.floor.expect("floor reported for i <= k");
            records.push(CodimRecord::new("projection_floor", Verdict::at_least(floor, m + 1)));
        }
    }

    let span = span_case_check(p);
    let span_case_divergences = span.iter().filter(|v| !v.consistent()).map(|v| v.index).collect();
    for v in &span {
        slice_bound = slice_bound.min(v.verdict.value.clone());
        records.push(CodimRecord::new(format!("span_case[{}]", v.index), v.verdict.clone()));
    }

    records.push(CodimRecord::new(
        "slice_bound",
        Verdict::at_least(slice_bound.clone(), slice_threshold),
    ));
    records.push(CodimRecord::new(
        "total_identity",
        Verdict::at_least(special + slice_threshold, m + k + 1),
    ));
    records.push(CodimRecord::new(
        "total",
        Verdict::at_least(slice_bound + special, m + k + 1),
    ));

    let certified = records.iter().all(|r| r.verdict.holds) && span.iter().all(SpanCaseVerdict::consistent);
    Ok(CodimReport {
        records,
        span_case_divergences,
        certified,
    })
}
