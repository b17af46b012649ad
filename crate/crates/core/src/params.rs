//! The parameter tuple `(k, M, d, ξ)` of a complete intersection with one
//! singular point, and the two admissibility inequalities it must satisfy.
//!
//! The variety lives in projective space of dimension `M + k` and is cut out
//! by `k` equations of degrees `d_1 ≤ … ≤ d_k` with `Σ d_i = M + k`. The
//! `i`-th equation has multiplicity `ξ_i` at the distinguished point. The two
//! vectors are paired positionally, which is why degree vectors are never
//! re-sorted on input.

use crate::arith::Verdict;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use std::fmt;
use thiserror::Error;

/// First violated structural constraint of a parameter tuple.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ShapeError {
    #[error("k must be at least 2 (got {0})")]
    TooFewEquations(usize),
    #[error("M must be at least 2k+1 = {min} (got {m})")]
    DimensionTooSmall { m: u32, min: u32 },
    #[error("degree vector has length {got}, expected k = {k}")]
    DegreeLength { got: usize, k: usize },
    #[error("multiplicity vector has length {got}, expected k = {k}")]
    MultiplicityLength { got: usize, k: usize },
    #[error("empty degree vector")]
    Empty,
    #[error("degree below 2 at position {0}")]
    DegreeBelowTwo(usize),
    #[error("degrees not sorted at position {0}")]
    Unsorted(usize),
    #[error("degree sum mismatch: sum of degrees is {sum}, expected M + k = {expected}")]
    DegreeSumMismatch { sum: u64, expected: u64 },
    #[error("xi below 1 at position {0}")]
    MultiplicityBelowOne(usize),
    #[error("xi exceeds degree at position {index}: {xi} > {degree}")]
    MultiplicityExceedsDegree { index: usize, xi: u32, degree: u32 },
}

/// Non-decreasing degrees `d_1 ≤ … ≤ d_k`, each at least 2.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DegreeVector(Vec<u32>);

impl DegreeVector {
    pub fn new(entries: Vec<u32>) -> Result<Self, ShapeError> {
        if entries.is_empty() {
            return Err(ShapeError::Empty);
        }
        for (i, &d) in entries.iter().enumerate() {
            if d < 2 {
                return Err(ShapeError::DegreeBelowTwo(i));
            }
            if i > 0 && entries[i - 1] > d {
                return Err(ShapeError::Unsorted(i));
            }
        }
        Ok(DegreeVector(entries))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|d| = Σ d_i`.
    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&d| u64::from(d)).sum()
    }

    /// The largest degree `d_k`.
    pub fn last(&self) -> u32 {
        *self.0.last().expect("degree vectors are non-empty")
    }

    /// Every non-decreasing vector of length `k` with entries `≥ 2` summing
    /// to `total`, in lexicographic order.
    pub fn all_with_sum(k: usize, total: u64) -> SortedDegreeVectors {
        SortedDegreeVectors::new(k, total)
    }
}

impl fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.0)
    }
}

/// Multiplicities `ξ_1 … ξ_k` at the singular point.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiplicityVector(Vec<u32>);

impl MultiplicityVector {
    pub fn new(entries: Vec<u32>) -> Result<Self, ShapeError> {
        if let Some(i) = entries.iter().position(|&x| x < 1) {
            return Err(ShapeError::MultiplicityBelowOne(i));
        }
        Ok(MultiplicityVector(entries))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for MultiplicityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.0)
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, xs: &[u32]) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

/// A validated parameter tuple with its derived invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidityParams {
    m: u32,
    degrees: DegreeVector,
    multiplicities: MultiplicityVector,
    c_star: usize,
    sing_type: Vec<u32>,
    mu: BigUint,
    deg_v: BigUint,
}

/// Checks every structural constraint and derives `c_*`, the singularity
/// type, `μ = Π ξ_i` and `d = Π d_i`.
pub fn validate_shape(k: usize, m: u32, d: &[u32], xi: &[u32]) -> Result<RigidityParams, ShapeError> {
    if k < 2 {
        return Err(ShapeError::TooFewEquations(k));
    }
    let min_m = 2 * k as u64 + 1;
    if u64::from(m) < min_m {
        return Err(ShapeError::DimensionTooSmall { m, min: min_m as u32 });
    }
    if d.len() != k {
        return Err(ShapeError::DegreeLength { got: d.len(), k });
    }
    if xi.len() != k {
        return Err(ShapeError::MultiplicityLength { got: xi.len(), k });
    }
    let degrees = DegreeVector::new(d.to_vec())?;
    let expected = u64::from(m) + k as u64;
    if degrees.sum() != expected {
        return Err(ShapeError::DegreeSumMismatch {
            sum: degrees.sum(),
            expected,
        });
    }
    let multiplicities = MultiplicityVector::new(xi.to_vec())?;
    RigidityParams::derive(m, degrees, multiplicities)
}

impl RigidityParams {
    /// Builds a tuple from the two vectors alone, taking `M = Σ d_i − k`.
    ///
    /// Only the per-entry constraints are enforced (sorted degrees `≥ 2`,
    /// `1 ≤ ξ_i ≤ d_i`, matching lengths); `k ≥ 2` and `M ≥ 2k + 1` are not.
    /// Used for the combinatorics of degenerate or single-equation cases.
    pub fn from_vectors(d: &[u32], xi: &[u32]) -> Result<Self, ShapeError> {
        let degrees = DegreeVector::new(d.to_vec())?;
        if xi.len() != d.len() {
            return Err(ShapeError::MultiplicityLength {
                got: xi.len(),
                k: d.len(),
            });
        }
        let multiplicities = MultiplicityVector::new(xi.to_vec())?;
        let m = degrees.sum() - d.len() as u64;
        RigidityParams::derive(m as u32, degrees, multiplicities)
    }

    fn derive(m: u32, degrees: DegreeVector, multiplicities: MultiplicityVector) -> Result<Self, ShapeError> {
        let d = degrees.as_slice();
        let xi = multiplicities.as_slice();
        for (index, (&x, &dd)) in xi.iter().zip(d).enumerate() {
            if x > dd {
                return Err(ShapeError::MultiplicityExceedsDegree {
                    index,
                    xi: x,
                    degree: dd,
                });
            }
        }
        let c_star = xi.iter().zip(d).filter(|(x, dd)| x == dd).count();
        let mut sing_type: Vec<u32> = xi.iter().copied().filter(|&x| x >= 2).collect();
        sing_type.sort_unstable();
        let mu = xi.iter().map(|&x| BigUint::from(x)).product();
        let deg_v = d.iter().map(|&x| BigUint::from(x)).product();
        Ok(RigidityParams {
            m,
            degrees,
            multiplicities,
            c_star,
            sing_type,
            mu,
            deg_v,
        })
    }

    pub fn k(&self) -> usize {
        self.degrees.len()
    }

    /// Dimension `M` of the variety.
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn degrees(&self) -> &DegreeVector {
        &self.degrees
    }

    pub fn multiplicities(&self) -> &MultiplicityVector {
        &self.multiplicities
    }

    /// Pairs `(d_i, ξ_i)` in index order.
    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.degrees
            .as_slice()
            .iter()
            .copied()
            .zip(self.multiplicities.as_slice().iter().copied())
    }

    /// `c_* = ♯{i : ξ_i = d_i}`, the number of cones with vertex at the point.
    pub fn c_star(&self) -> usize {
        self.c_star
    }

    /// The type of the singularity: the sorted `ξ_i ≥ 2`.
    pub fn sing_type(&self) -> &[u32] {
        &self.sing_type
    }

    /// Length `l` of the singularity type.
    pub fn l(&self) -> usize {
        self.sing_type.len()
    }

    /// Multiplicity of the singular point, `μ = Π ξ_i`.
    pub fn mu(&self) -> &BigUint {
        &self.mu
    }

    /// Degree of the variety, `d = Π d_i`.
    pub fn deg_v(&self) -> &BigUint {
        &self.deg_v
    }
}

impl fmt::Display for RigidityParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k={} M={} d=({}) xi=({})",
            self.k(),
            self.m,
            self.degrees,
            self.multiplicities
        )
    }
}

/// `Σ [(d_i+1)(d_i+2) − ξ_i(ξ_i+1)] ≥ 4M + 2d_k + 2c_* − 2k`.
pub fn check_main_inequality(p: &RigidityParams) -> Verdict {
    let lhs: i128 = p
        .pairs()
        .map(|(d, x)| {
            let (d, x) = (i128::from(d), i128::from(x));
            (d + 1) * (d + 2) - x * (x + 1)
        })
        .sum();
    let rhs = 4 * i128::from(p.m) + 2 * i128::from(p.degrees.last()) + 2 * p.c_star as i128 - 2 * p.k() as i128;
    Verdict::at_least(lhs, rhs)
}

/// `M ≥ 3 + Σ_{ξ_i ≥ 2} (ξ_i + 1)`.
pub fn check_dimension_inequality(p: &RigidityParams) -> Verdict {
    let rhs: u64 = 3 + p.sing_type.iter().map(|&x| u64::from(x) + 1).sum::<u64>();
    Verdict::at_least(p.m, rhs)
}

/// The ratio `μ / d` of the point multiplicity to the degree, reduced.
pub fn mu_over_d(p: &RigidityParams) -> BigRational {
    BigRational::new(BigInt::from(p.mu.clone()), BigInt::from(p.deg_v.clone()))
}

/// Lexicographic iterator over sorted degree vectors with a fixed sum.
#[derive(Clone, Debug)]
pub struct SortedDegreeVectors {
    k: usize,
    total: u64,
    current: Option<Vec<u64>>,
}

impl SortedDegreeVectors {
    fn new(k: usize, total: u64) -> Self {
        let current = if k == 0 || total < 2 * k as u64 {
            None
        } else {
            // Smallest vector in lex order: 2, …, 2, remainder.
            let mut v = vec![2u64; k];
            v[k - 1] = total - 2 * (k as u64 - 1);
            Some(v)
        };
        SortedDegreeVectors { k, total, current }
    }

    /// Lex successor: bump the rightmost position that can grow and refill
    /// the tail with the smallest sorted completion.
    fn advance(&self, v: &[u64]) -> Option<Vec<u64>> {
        let k = self.k;
        if k < 2 {
            return None;
        }
        for pos in (0..k - 1).rev() {
            let prefix: u64 = v[..pos].iter().sum();
            let candidate = v[pos] + 1;
            let slots = (k - pos) as u64;
            // Remaining positions must all be at least `candidate`.
            if prefix + candidate * slots <= self.total {
                let mut next = v[..pos].to_vec();
                next.extend(std::iter::repeat_n(candidate, k - pos - 1));
                next.push(self.total - prefix - candidate * (slots - 1));
                return Some(next);
            }
        }
        None
    }
}

impl Iterator for SortedDegreeVectors {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Self::Item> {
        let v = self.current.take()?;
        self.current = self.advance(&v);
        Some(v.iter().map(|&x| x as u32).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn derives_invariants_for_the_running_example() {
        let p = validate_shape(2, 6, &[4, 4], &[2, 1]).unwrap();
        assert_eq!(p.c_star(), 0);
        assert_eq!(p.mu(), &BigUint::from(2u32));
        assert_eq!(p.deg_v(), &BigUint::from(16u32));
        assert_eq!(p.sing_type(), &[2]);
        assert_eq!(p.l(), 1);
    }

    #[test]
    fn smooth_point_has_empty_type() {
        let p = validate_shape(2, 5, &[3, 4], &[1, 1]).unwrap();
        assert_eq!(p.c_star(), 0);
        assert_eq!(p.mu(), &BigUint::one());
        assert!(p.sing_type().is_empty());
    }

    #[test]
    fn shape_errors_name_the_violation() {
        let err = validate_shape(2, 6, &[4, 4], &[5, 1]).unwrap_err();
        assert!(err.to_string().contains("xi exceeds degree"), "{err}");
        let err = validate_shape(2, 6, &[4, 5], &[1, 1]).unwrap_err();
        assert!(err.to_string().contains("degree sum mismatch"), "{err}");
        assert_eq!(
            validate_shape(2, 6, &[5, 3], &[1, 1]).unwrap_err(),
            ShapeError::Unsorted(1)
        );
        assert_eq!(
            validate_shape(1, 6, &[7], &[1]).unwrap_err(),
            ShapeError::TooFewEquations(1)
        );
        assert_eq!(
            validate_shape(2, 4, &[3, 3], &[1, 1]).unwrap_err(),
            ShapeError::DimensionTooSmall { m: 4, min: 5 }
        );
        assert_eq!(
            validate_shape(2, 6, &[1, 7], &[1, 1]).unwrap_err(),
            ShapeError::DegreeBelowTwo(0)
        );
        assert_eq!(
            validate_shape(2, 6, &[4, 4], &[0, 1]).unwrap_err(),
            ShapeError::MultiplicityBelowOne(0)
        );
        assert!(matches!(
            validate_shape(2, 6, &[4, 4], &[1]),
            Err(ShapeError::MultiplicityLength { got: 1, k: 2 })
        ));
    }

    #[test]
    fn main_inequality_examples() {
        let v = check_main_inequality(&validate_shape(2, 6, &[4, 4], &[2, 1]).unwrap());
        assert_eq!((v.value, v.threshold, v.holds), (52.into(), 28.into(), true));
        let v = check_main_inequality(&validate_shape(2, 5, &[3, 4], &[1, 1]).unwrap());
        assert_eq!((v.value, v.threshold, v.holds), (46.into(), 24.into(), true));
        let p = validate_shape(2, 5, &[3, 4], &[3, 4]).unwrap();
        assert_eq!(p.c_star(), 2);
        let v = check_main_inequality(&p);
        assert_eq!((v.value, v.threshold, v.holds), (18.into(), 28.into(), false));
    }

    #[test]
    fn dimension_inequality_examples() {
        let v = check_dimension_inequality(&validate_shape(2, 6, &[4, 4], &[2, 1]).unwrap());
        assert_eq!((v.value, v.threshold, v.holds), (6.into(), 6.into(), true));
        let v = check_dimension_inequality(&validate_shape(2, 9, &[5, 6], &[1, 1]).unwrap());
        assert_eq!(v.threshold, 3.into());
        assert!(v.holds);
        let v = check_dimension_inequality(&validate_shape(2, 5, &[3, 4], &[2, 1]).unwrap());
        assert_eq!((v.value, v.threshold, v.holds), (5.into(), 6.into(), false));
    }

    #[test]
    fn mu_over_d_examples() {
        assert_eq!(mu_over_d(&validate_shape(2, 6, &[4, 4], &[2, 1]).unwrap()), ratio(1, 8));
        assert_eq!(
            mu_over_d(&validate_shape(2, 5, &[3, 4], &[1, 1]).unwrap()),
            ratio(1, 12)
        );
        assert_eq!(mu_over_d(&validate_shape(2, 5, &[3, 4], &[3, 4]).unwrap()), ratio(1, 1));
    }

    #[test]
    fn from_vectors_accepts_small_shapes() {
        let p = RigidityParams::from_vectors(&[2, 2], &[1, 1]).unwrap();
        assert_eq!(p.m(), 2);
        let p = RigidityParams::from_vectors(&[5], &[1]).unwrap();
        assert_eq!((p.k(), p.m()), (1, 4));
        assert!(RigidityParams::from_vectors(&[3, 3], &[4, 1]).is_err());
    }

    #[test]
    fn sorted_degree_vectors_small_cases() {
        let all: Vec<_> = DegreeVector::all_with_sum(2, 8).collect();
        assert_eq!(all, vec![vec![2, 6], vec![3, 5], vec![4, 4]]);
        let all: Vec<_> = DegreeVector::all_with_sum(3, 9).collect();
        assert_eq!(all, vec![vec![2, 2, 5], vec![2, 3, 4], vec![3, 3, 3]]);
        assert_eq!(DegreeVector::all_with_sum(3, 5).count(), 0);
        assert_eq!(DegreeVector::all_with_sum(1, 5).collect::<Vec<_>>(), vec![vec![5]]);
    }

    #[test]
    fn sorted_degree_vectors_match_naive_filter() {
        for k in 1..=4usize {
            for total in 0..=16u64 {
                let mut naive = Vec::new();
                let mut v = vec![2u32; k];
                loop {
                    if v.iter().map(|&x| u64::from(x)).sum::<u64>() == total && v.windows(2).all(|w| w[0] <= w[1]) {
                        naive.push(v.clone());
                    }
                    let mut pos = 0;
                    loop {
                        if pos == k {
                            break;
                        }
                        v[pos] += 1;
                        if u64::from(v[pos]) <= total {
                            break;
                        }
                        v[pos] = 2;
                        pos += 1;
                    }
                    if pos == k {
                        break;
                    }
                }
                naive.sort();
                let fast: Vec<_> = DegreeVector::all_with_sum(k, total).collect();
                assert_eq!(fast, naive, "k={k} total={total}");
            }
        }
    }
}
