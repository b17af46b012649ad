//! Hypertangent divisor schedules at the singular point.
//!
//! The `j`-th hypertangent system is spanned by truncations `f_{i,α}` of the
//! equations with `ξ_i ≤ α ≤ min(j, d_i − 1)`. Counting those pairs gives
//! `c(j)`; the increments `m(j) = c(j) − c(j − 1)` say how many general
//! divisors are taken from level `j`. A divisor from level `b` has degree `b`
//! and vanishes to order `b + 1` at the point, so intersecting with it
//! multiplies the ratio `mult / deg` of a cycle by the slope `(b + 1) / b`.
//!
//! Starting from the self-intersection of a mobile system, whose ratio is
//! strictly above `4μ / d`, and intersecting with all divisors but the first
//! two yields a cycle with ratio above `4μ / d · Π_{i≥3} β_i`. The telescoping
//! identity `Π β_i = d / μ` turns this into `4 / (β_1 β_2) ≥ 1`, which is
//! impossible for a positive-dimensional subvariety.

use crate::params::RigidityParams;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// `c(j) = ♯{(i, α) : ξ_i ≤ α ≤ min(j, d_i − 1)}`.
pub fn c_of_j(p: &RigidityParams, j: u32) -> u64 {
    p.pairs()
        .map(|(d, xi)| {
            let top = j.min(d - 1);
            if top >= xi {
                u64::from(top - xi + 1)
            } else {
                0
            }
        })
        .sum()
}

/// The slope `(b + 1) / b` of a divisor taken from level `b`.
pub fn slope(level: u32) -> BigRational {
    BigRational::new(BigInt::from(level) + 1, BigInt::from(level))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypertangentSchedule {
    first_level: Option<u32>,
    c_table: Vec<u64>,
    m_table: Vec<u64>,
    levels: Vec<u32>,
}

impl HypertangentSchedule {
    /// `a`, the first level with `c(j) ≥ 1`; `None` for a degenerate schedule.
    pub fn first_level(&self) -> Option<u32> {
        self.first_level
    }

    /// `c(j)` for `j = 1 … d_k − 1`, index `j − 1`.
    pub fn c_table(&self) -> &[u64] {
        &self.c_table
    }

    /// `m(j)` for `j = 1 … d_k − 1`, index `j − 1`.
    pub fn m_table(&self) -> &[u64] {
        &self.m_table
    }

    /// Level `b` of each divisor `R_1 … R_m` in standard order.
    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    /// Slopes `β_1 ≥ … ≥ β_m` in standard order.
    pub fn slopes(&self) -> Vec<BigRational> {
        self.levels.iter().map(|&b| slope(b)).collect()
    }

    /// Total number `m` of hypertangent divisors.
    pub fn m_total(&self) -> u64 {
        self.levels.len() as u64
    }

    /// No hypertangent levels at all: every equation is a cone at the point.
    pub fn is_degenerate(&self) -> bool {
        self.levels.is_empty()
    }
}

/// Tabulates `c` and `m` and lists the divisors level by level, so slopes
/// come out non-increasing.
pub fn build_schedule(p: &RigidityParams) -> HypertangentSchedule {
    let top = p.degrees().last() - 1;
    let mut c_table = Vec::with_capacity(top as usize);
    let mut m_table = Vec::with_capacity(top as usize);
    let mut levels = Vec::new();
    let mut prev = 0u64;
    for j in 1..=top {
        let c = c_of_j(p, j);
        let m = c - prev;
        c_table.push(c);
        m_table.push(m);
        levels.extend(std::iter::repeat_n(j, m as usize));
        prev = c;
    }
    let first_level = c_table.iter().position(|&c| c >= 1).map(|i| i as u32 + 1);
    HypertangentSchedule {
        first_level,
        c_table,
        m_table,
        levels,
    }
}

/// `Π β_i`; the empty product is 1.
pub fn slope_product(s: &HypertangentSchedule) -> BigRational {
    s.slopes().into_iter().fold(BigRational::one(), |acc, b| acc * b)
}

/// One step `Y_{i−1} → Y_i` of the ratio chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStep {
    pub index: usize,
    pub slope: BigRational,
    pub bound: BigRational,
}

/// Lower bounds for `mult_o / deg` along `Y_2, …, Y_m`, normalized so the
/// degree `n` of the mobile system drops out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioChain {
    pub seed: BigRational,
    pub steps: Vec<ChainStep>,
    pub final_bound: BigRational,
    /// Fewer than three divisors, so no step is taken.
    pub short_chain: bool,
}

/// Seeds the chain with `4μ / d` and multiplies by `β_3, …, β_m`.
pub fn ratio_chain(p: &RigidityParams, s: &HypertangentSchedule) -> RatioChain {
    ratio_chain_from_slopes(p, &s.slopes())
}

/// Same as [`ratio_chain`] over an explicit slope sequence; the first two
/// slopes are skipped whatever their values.
pub fn ratio_chain_from_slopes(p: &RigidityParams, slopes: &[BigRational]) -> RatioChain {
    let seed = BigRational::new(
        BigInt::from(4u32) * BigInt::from(p.mu().clone()),
        BigInt::from(p.deg_v().clone()),
    );
    let mut bound = seed.clone();
    let mut steps = Vec::with_capacity(slopes.len().saturating_sub(2));
    for (offset, beta) in slopes.iter().enumerate().skip(2) {
        bound = &bound * beta;
        steps.push(ChainStep {
            index: offset + 1,
            slope: beta.clone(),
            bound: bound.clone(),
        });
    }
    RatioChain {
        seed,
        steps,
        final_bound: bound,
        short_chain: slopes.len() < 3,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub ok: bool,
    pub margin: BigRational,
}

impl Certificate {
    pub const EXPLANATION: &'static str = "the chain bound is non-strict; since the self-intersection ratio strictly \
         exceeds the seed, final_bound >= 1 forces mult_o(Y_m) > deg(Y_m), which no subvariety can satisfy";
}

/// `ok` iff the final bound is at least 1; `margin = final_bound − 1`.
pub fn certify_exclusion(chain: &RatioChain) -> Certificate {
    let one = BigRational::one();
    Certificate {
        ok: chain.final_bound >= one,
        margin: &chain.final_bound - one,
    }
}
