//! Prime-field polynomials, the coordinate shift to a neighbouring point,
//! and a point-counting oracle for the regular-sequence condition.
//!
//! Everything here is exact: field elements are residues, counts are
//! integers, and thresholds are rationals compared by cross-multiplication.

pub mod count;
pub mod field;
pub mod poly;
pub mod regular;
pub mod sample;
pub mod shift;

pub use count::{count_affine_zeros, prefix_zero_counts};
pub use field::{is_prime, Fp};
pub use poly::{monomials_of_degree, Monomial, MultiPoly};
pub use regular::{check_regularity, check_regularity_batch, BatchStats, RegularityVerdict};
pub use sample::{random_tuple, sample_tuple, SampleKind, TupleSample};
pub use shift::{shift_expand, shift_expand_direct};

/// Prime used when none is given.
pub const DEFAULT_PRIME: u64 = 5;

/// Default limit on the number of enumerated points.
pub const DEFAULT_CAP: u64 = 10_000_000;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("enumeration budget exceeded: {prime}^{nvars} points is more than the cap {cap}")]
    Budget { prime: u64, nvars: usize, cap: u64 },
    #[error("grading error: {0}")]
    Grading(String),
    #[error("ring mismatch: {0}")]
    Ring(String),
    #[error("{0} is not a supported prime")]
    NotPrime(u64),
    #[error("malformed sample dump: {0}")]
    Parse(String),
}

/// Rejects moduli that are composite or too large for `u64` products.
pub fn require_prime(p: u64) -> Result<(), FieldError> {
    if is_prime(p) && p <= field::MAX_MODULUS {
        Ok(())
    } else {
        Err(FieldError::NotPrime(p))
    }
}
