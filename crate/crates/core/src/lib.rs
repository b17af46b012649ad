//! Exact arithmetic for the numerical side of birational superrigidity of
//! Fano complete intersections with a singular point.
//!
//! A parameter tuple `(k, M, d, ξ)` describes `k` equations of degrees `d_i`
//! in projective space of dimension `M + k`, the `i`-th having multiplicity
//! `ξ_i` at a distinguished point. The crate checks the two admissibility
//! inequalities, builds the hypertangent divisor schedule and its ratio
//! chain, assembles the codimension bound for non-regular tuples, enumerates
//! the admissible set, and probes the regular-sequence condition over small
//! prime fields by exhaustive point counting.
//!
//! ```
//! use rigidity_lab::params::validate_shape;
//! use rigidity_lab::hypertangent::{build_schedule, ratio_chain, certify_exclusion};
//!
//! let p = validate_shape(2, 6, &[4, 4], &[2, 1]).unwrap();
//! let chain = ratio_chain(&p, &build_schedule(&p));
//! assert_eq!(chain.final_bound.to_string(), "4/3");
//! assert!(certify_exclusion(&chain).ok);
//! ```
//!
//! Everything is exact: integers are arbitrary precision where they can
//! grow, ratios are reduced rationals, and field elements are residues.

pub mod arith;
pub mod cli;
pub mod codim;
pub mod explorer;
pub mod finitefield;
pub mod hypertangent;
pub mod params;

// The guide's code listings run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/parameters.md")]
    mod parameters {}
    #[doc = include_str!("../../../book/src/hypertangent.md")]
    mod hypertangent {}
    #[doc = include_str!("../../../book/src/codimension.md")]
    mod codimension {}
    #[doc = include_str!("../../../book/src/finite-fields.md")]
    mod finite_fields {}
    #[doc = include_str!("../../../book/src/explorer.md")]
    mod explorer {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/formats.md")]
    mod formats {}
}
