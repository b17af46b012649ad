//! Point-count test for the regular-sequence condition.
//!
//! A regular sequence of `s` forms in `N` variables cuts out a cone of
//! dimension `N − s`, which over `F_p` has on the order of `p^(N−s)` points.
//! The test counts the zeros `N(s′)` of every prefix and accepts when
//! `N(s′) ≤ factor · p^(N−s′)` for all `s′ ≥ 1`. This is evidence, not proof.

use super::count::prefix_zero_counts;
use super::sample::{sample_tuple, SampleKind, TupleSample};
use super::FieldError;
use crate::params::RigidityParams;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityVerdict {
    /// `counts[s′]` is `N(s′)` for `s′ = 0 … s`.
    pub counts: Vec<u64>,
    /// `thresholds[s′]` is `factor · p^(N−s′)`; entry 0 is unused by the test.
    pub thresholds: Vec<BigRational>,
    pub pass: bool,
    /// Smallest prefix length over its threshold.
    pub first_failure: Option<usize>,
}

fn threshold(factor: &BigRational, prime: u64, exponent: i64) -> BigRational {
    let p = BigRational::from_integer(BigInt::from(prime));
    let power = if exponent >= 0 {
        num_traits::pow(p, exponent as usize)
    } else {
        BigRational::one() / num_traits::pow(p, (-exponent) as usize)
    };
    factor * power
}

pub fn check_regularity(sample: &TupleSample, factor: &BigRational, cap: u64) -> Result<RegularityVerdict, FieldError> {
    let forms = sample.forms();
    let counts = prefix_zero_counts(&forms, sample.prime, sample.nvars, cap)?;
    let thresholds: Vec<BigRational> = (0..counts.len())
        .map(|s| threshold(factor, sample.prime, sample.nvars as i64 - s as i64))
        .collect();
    let first_failure = (1..counts.len()).find(|&s| BigRational::from_integer(BigInt::from(counts[s])) > thresholds[s]);
    Ok(RegularityVerdict {
        counts,
        thresholds,
        pass: first_failure.is_none(),
        first_failure,
    })
}

/// Aggregate of [`check_regularity`] over many seeds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatchStats {
    pub trials: usize,
    pub passes: usize,
    pub pass_rate: BigRational,
    /// For each prefix length, how often each count occurred.
    pub count_distributions: Vec<BTreeMap<u64, usize>>,
    pub per_seed: Vec<(u64, RegularityVerdict)>,
}

impl BatchStats {
    fn collect(per_seed: Vec<(u64, RegularityVerdict)>) -> Self {
        let trials = per_seed.len();
        let passes = per_seed.iter().filter(|(_, v)| v.pass).count();
        let pass_rate = if trials == 0 {
            BigRational::zero()
        } else {
            BigRational::new(BigInt::from(passes), BigInt::from(trials))
        };
        let width = per_seed.first().map_or(0, |(_, v)| v.counts.len());
        let mut count_distributions = vec![BTreeMap::new(); width];
        for (_, v) in &per_seed {
            for (s, &c) in v.counts.iter().enumerate() {
                *count_distributions[s].entry(c).or_insert(0) += 1;
            }
        }
        BatchStats {
            trials,
            passes,
            pass_rate,
            count_distributions,
            per_seed,
        }
    }

    /// Mean of `N(s′)` over all trials, exactly.
    pub fn mean_count(&self, prefix: usize) -> BigRational {
        if self.trials == 0 {
            return BigRational::zero();
        }
        let total: u64 = self.per_seed.iter().map(|(_, v)| v.counts[prefix]).sum();
        BigRational::new(BigInt::from(total), BigInt::from(self.trials))
    }
}

/// Runs the test on one sample per seed. Seeds are processed in parallel
/// and the results kept in seed-list order.
pub fn check_regularity_batch(
    params: &RigidityParams,
    prime: u64,
    seeds: &[u64],
    kind: SampleKind,
    factor: &BigRational,
    cap: u64,
) -> Result<BatchStats, FieldError> {
    let per_seed = seeds
        .par_iter()
        .map(|&seed| {
            let sample = sample_tuple(params, prime, seed, kind, cap)?;
            Ok((seed, check_regularity(&sample, factor, cap)?))
        })
        .collect::<Result<Vec<_>, FieldError>>()?;
    Ok(BatchStats::collect(per_seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finitefield::{MultiPoly, DEFAULT_CAP};
    use crate::params::validate_shape;

    fn four() -> BigRational {
        BigRational::from_integer(BigInt::from(4))
    }

    #[test]
    fn coordinate_hyperplanes_meet_the_bound_exactly() {
        let params = validate_shape(2, 5, &[2, 5], &[2, 5]).unwrap();
        let n = 7;
        let p = 3;
        let mut sample = sample_tuple(&params, p, 0, SampleKind::Random, DEFAULT_CAP).unwrap();
        let mut v = 0;
        for row in sample.polys.iter_mut() {
            for q in row.iter_mut() {
                *q = MultiPoly::variable(v, n, p);
                v += 1;
            }
        }
        let verdict = check_regularity(&sample, &BigRational::one(), DEFAULT_CAP).unwrap();
        let expected: Vec<u64> = (0..=2).map(|s| 3u64.pow(7 - s)).collect();
        assert_eq!(verdict.counts, expected);
        assert!(verdict.pass);
    }

    #[test]
    fn first_variable_powers_fail_once_the_bound_drops_below_the_cone() {
        let params = validate_shape(2, 6, &[4, 4], &[2, 1]).unwrap();
        let stats = check_regularity_batch(
            &params,
            3,
            &[0, 1],
            SampleKind::FirstVariablePowers,
            &four(),
            DEFAULT_CAP,
        )
        .unwrap();
        assert_eq!(stats.passes, 0);
        assert!(stats.pass_rate.is_zero());
        for (_, v) in &stats.per_seed {
            // 3^7 points stay; 4·3^(8−s′) drops below that at s′ = 3.
            assert_eq!(v.first_failure, Some(3));
            assert!(v.counts[1..].iter().all(|&c| c == 3u64.pow(7)));
        }
    }

    #[test]
    fn counts_never_increase_along_prefixes() {
        let params = validate_shape(2, 5, &[3, 4], &[2, 1]).unwrap();
        let stats = check_regularity_batch(&params, 3, &[5, 6, 7], SampleKind::Random, &four(), DEFAULT_CAP).unwrap();
        for (_, v) in &stats.per_seed {
            assert!(v.counts.windows(2).all(|w| w[1] <= w[0]));
            assert_eq!(v.counts[0], 3u64.pow(7));
        }
        assert_eq!(stats.count_distributions[0].get(&2187), Some(&3));
    }

    #[test]
    fn thresholds_below_one_point() {
        assert_eq!(threshold(&four(), 5, -1), BigRational::new(4.into(), 5.into()));
        assert_eq!(threshold(&four(), 5, 2), BigRational::from_integer(100.into()));
    }
}
