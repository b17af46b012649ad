//! Exact integer and rational helpers shared by every module.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::Value;
use std::fmt;

/// Binomial coefficient `C(n, r)`, zero when `r > n`.
pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for t in 0..r {
        // acc * (n - t) is always divisible by (t + 1) at this point.
        acc = acc * BigUint::from(n - t) / BigUint::from(t + 1);
    }
    acc
}

/// Canonical text form of a rational: reduced, `p/q`, or bare `p` when `q = 1`.
pub fn render_rational(r: &BigRational) -> String {
    // Ratio keeps itself reduced with a positive denominator.
    r.to_string()
}

/// JSON form of an exact integer. Values outside `i64` become decimal strings.
pub fn int_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(small) => Value::from(small),
        None => Value::String(v.to_string()),
    }
}

/// An outcome `value >= threshold`, carrying both sides so reports can show margins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub value: BigInt,
    pub threshold: BigInt,
    pub holds: bool,
}

impl Verdict {
    pub fn at_least(value: impl Into<BigInt>, threshold: impl Into<BigInt>) -> Self {
        let value = value.into();
        let threshold = threshold.into();
        let holds = value >= threshold;
        Verdict {
            value,
            threshold,
            holds,
        }
    }

    pub fn margin(&self) -> BigInt {
        &self.value - &self.threshold
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.holds { "≥" } else { "<" };
        write!(f, "{} {} {}", self.value, rel, self.threshold)
    }
}
