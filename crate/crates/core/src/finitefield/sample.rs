//! Seeded tuples of equations `f_i = q_{i,ξ_i} + … + q_{i,d_i}` in
//! `N = M + k` variables, and their plain-text dump.
//!
//! Dump format, one item per line:
//!
//! ```text
//! tuple-sample v1
//! kind random
//! prime 5
//! seed 1
//! variables 8
//! degrees 4,4
//! multiplicities 2,1
//! form 1 2 36
//! 2 0 0 0 0 0 0 0 3
//! …
//! ```
//!
//! Each `form i j t` header (1-based `i`) is followed by `t` monomial lines:
//! the exponent vector then the coefficient.

use super::count::point_budget;
use super::field::Fp;
use super::poly::{monomials_of_degree, MultiPoly};
use super::{require_prime, FieldError};
use crate::params::{validate_shape, RigidityParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::{self, Write as _};
use std::str::FromStr;

/// How the forms of a sample are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SampleKind {
    /// Independent uniform coefficients on every monomial.
    Random,
    /// Random, except that every form of the last equation is a multiple of
    /// an earlier form (or a power of `z_1` when none of its degree exists),
    /// so the sequence cannot be regular.
    RepeatedForms,
    /// Every form is `z_1^j`.
    FirstVariablePowers,
}

impl SampleKind {
    pub fn name(self) -> &'static str {
        match self {
            SampleKind::Random => "random",
            SampleKind::RepeatedForms => "repeated",
            SampleKind::FirstVariablePowers => "z1-powers",
        }
    }
}

impl fmt::Display for SampleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SampleKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "random" => Ok(SampleKind::Random),
            "repeated" => Ok(SampleKind::RepeatedForms),
            "z1-powers" => Ok(SampleKind::FirstVariablePowers),
            other => Err(format!("unknown sample kind {other:?} (random, repeated, z1-powers)")),
        }
    }
}

/// `polys[i][t]` is `q_{i, ξ_i + t}`, homogeneous of that degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleSample {
    pub params: RigidityParams,
    pub prime: u64,
    pub seed: u64,
    pub kind: SampleKind,
    pub nvars: usize,
    pub polys: Vec<Vec<MultiPoly>>,
}

impl TupleSample {
    /// All forms in `(i, j)` lexicographic order.
    pub fn forms(&self) -> Vec<MultiPoly> {
        self.polys.iter().flatten().cloned().collect()
    }

    pub fn num_forms(&self) -> usize {
        self.polys.iter().map(Vec::len).sum()
    }

    /// The full equation `f_i` (zero-based `i`).
    pub fn equation(&self, i: usize) -> MultiPoly {
        self.polys[i]
            .iter()
            .fold(MultiPoly::zero(self.nvars, self.prime), |acc, q| &acc + q)
    }

    pub fn dump(&self) -> String {
        let mut out = String::new();
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        writeln!(out, "tuple-sample v1").unwrap();
        writeln!(out, "kind {}", self.kind).unwrap();
        writeln!(out, "prime {}", self.prime).unwrap();
        writeln!(out, "seed {}", self.seed).unwrap();
        writeln!(out, "variables {}", self.nvars).unwrap();
        writeln!(out, "degrees {}", join(self.params.degrees().as_slice())).unwrap();
        writeln!(out, "multiplicities {}", join(self.params.multiplicities().as_slice())).unwrap();
        for (i, row) in self.polys.iter().enumerate() {
            let xi = self.params.multiplicities().as_slice()[i];
            for (t, q) in row.iter().enumerate() {
                writeln!(out, "form {} {} {}", i + 1, xi + t as u32, q.num_terms()).unwrap();
                for (e, c) in q.terms() {
                    for x in e {
                        write!(out, "{x} ").unwrap();
                    }
                    writeln!(out, "{c}").unwrap();
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<TupleSample, FieldError> {
        let bad = |msg: String| FieldError::Parse(msg);
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let mut next = |what: &str| {
            lines
                .next()
                .map(|(n, l)| (n + 1, l.trim()))
                .ok_or_else(|| bad(format!("unexpected end of input, expected {what}")))
        };
        let (n, header) = next("header")?;
        if header != "tuple-sample v1" {
            return Err(bad(format!("line {n}: expected `tuple-sample v1`")));
        }
        let mut field = |key: &str| -> Result<String, FieldError> {
            let (n, line) = next(key)?;
            line.strip_prefix(key)
                .and_then(|rest| rest.strip_prefix(' '))
                .map(|v| v.trim().to_string())
                .ok_or_else(|| bad(format!("line {n}: expected `{key} …`")))
        };
        let num = |s: &str, key: &str| {
            s.parse::<u64>()
                .map_err(|_| bad(format!("{key}: not an integer: {s:?}")))
        };
        let list = |s: &str, key: &str| -> Result<Vec<u32>, FieldError> {
            s.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<u32>()
                        .map_err(|_| bad(format!("{key}: bad entry {x:?}")))
                })
                .collect()
        };
        let kind: SampleKind = field("kind")?.parse().map_err(bad)?;
        let prime = num(&field("prime")?, "prime")?;
        require_prime(prime)?;
        let seed = num(&field("seed")?, "seed")?;
        let nvars = num(&field("variables")?, "variables")? as usize;
        let d = list(&field("degrees")?, "degrees")?;
        let xi = list(&field("multiplicities")?, "multiplicities")?;
        let k = d.len();
        let m = nvars
            .checked_sub(k)
            .and_then(|m| u32::try_from(m).ok())
            .ok_or_else(|| bad("fewer variables than equations".into()))?;
        let params = validate_shape(k, m, &d, &xi).map_err(|e| bad(e.to_string()))?;
        let mut polys = Vec::with_capacity(k);
        for (i, (dd, x)) in params.pairs().enumerate() {
            let mut row = Vec::new();
            for j in x..=dd {
                let (n, line) = next("form header")?;
                let parts: Vec<&str> = line.split_whitespace().collect();
                let expected = [(i + 1).to_string(), j.to_string()];
                if parts.len() != 4 || parts[0] != "form" || parts[1] != expected[0] || parts[2] != expected[1] {
                    return Err(bad(format!("line {n}: expected `form {} {j} <terms>`", i + 1)));
                }
                let count = num(parts[3], "term count")?;
                let mut q = MultiPoly::zero(nvars, prime);
                for _ in 0..count {
                    let (n, line) = next("monomial")?;
                    let vals = line
                        .split_whitespace()
                        .map(|v| v.parse::<u64>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| bad(format!("line {n}: non-integer entry")))?;
                    if vals.len() != nvars + 1 {
                        return Err(bad(format!("line {n}: expected {} entries", nvars + 1)));
                    }
                    let exps = vals[..nvars]
                        .iter()
                        .map(|&e| u32::try_from(e))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| bad(format!("line {n}: exponent out of range")))?;
                    q.add_term(exps, Fp::new(vals[nvars], prime));
                }
                if q.is_zero() || !q.is_homogeneous_of(j) {
                    return Err(bad(format!("form {} {j} is not a nonzero form of degree {j}", i + 1)));
                }
                row.push(q);
            }
            polys.push(row);
        }
        if let Some((n, _)) = lines.next() {
            return Err(bad(format!("line {n}: trailing content")));
        }
        Ok(TupleSample {
            params,
            prime,
            seed,
            kind,
            nvars,
            polys,
        })
    }
}

/// A uniformly random nonzero form of degree `deg`.
fn random_form(rng: &mut ChaCha8Rng, nvars: usize, deg: u32, prime: u64) -> MultiPoly {
    let monomials = monomials_of_degree(nvars, deg);
    loop {
        let q = MultiPoly::from_terms(
            nvars,
            prime,
            monomials.iter().map(|e| (e.clone(), rng.gen_range(0..prime))),
        );
        if !q.is_zero() {
            return q;
        }
    }
}

fn z1_power(nvars: usize, deg: u32, prime: u64) -> MultiPoly {
    MultiPoly::variable(0, nvars, prime).pow(deg)
}

/// Draws a tuple of the given kind. Deterministic in `(params, prime, seed)`.
pub fn sample_tuple(
    params: &RigidityParams,
    prime: u64,
    seed: u64,
    kind: SampleKind,
    cap: u64,
) -> Result<TupleSample, FieldError> {
    require_prime(prime)?;
    let nvars = params.m() as usize + params.k();
    point_budget(prime, nvars, cap)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut polys: Vec<Vec<MultiPoly>> = params
        .pairs()
        .map(|(d, xi)| {
            (xi..=d)
                .map(|j| match kind {
                    SampleKind::FirstVariablePowers => z1_power(nvars, j, prime),
                    _ => random_form(&mut rng, nvars, j, prime),
                })
                .collect()
        })
        .collect();
    if kind == SampleKind::RepeatedForms {
        let last = polys.len() - 1;
        let (_, xi_last) = params.pairs().last().expect("k ≥ 1");
        let (_, xi_first) = params.pairs().next().expect("k ≥ 1");
        for t in 0..polys[last].len() {
            let j = xi_last + t as u32;
            // Source: forms of the first equation, or earlier forms of the
            // same equation when it is the only one.
            let sources: &[MultiPoly] = if last == 0 { &polys[0][..t] } else { &polys[0] };
            let source_xi = if last == 0 { xi_last } else { xi_first };
            let replacement = match (0..sources.len()).rev().find(|&s| source_xi + s as u32 <= j) {
                Some(s) => {
                    let j0 = source_xi + s as u32;
                    &z1_power(nvars, j - j0, prime) * &sources[s]
                }
                None if last == 0 => continue,
                None => z1_power(nvars, j, prime),
            };
            polys[last][t] = replacement;
        }
    }
    Ok(TupleSample {
        params: params.clone(),
        prime,
        seed,
        kind,
        nvars,
        polys,
    })
}

/// Uniform random coefficients on every monomial of every `q_{i,j}`; a form
/// that comes out identically zero is redrawn so that `deg q_{i,j} = j`.
pub fn random_tuple(params: &RigidityParams, prime: u64, seed: u64, cap: u64) -> Result<TupleSample, FieldError> {
    sample_tuple(params, prime, seed, SampleKind::Random, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finitefield::DEFAULT_CAP;

    fn running() -> RigidityParams {
        validate_shape(2, 6, &[4, 4], &[2, 1]).unwrap()
    }

    #[test]
    fn shape_of_random_tuple() {
        let s = random_tuple(&running(), 5, 3, DEFAULT_CAP).unwrap();
        assert_eq!(s.nvars, 8);
        assert_eq!(s.num_forms(), 7);
        let degs: Vec<Vec<u32>> = s
            .polys
            .iter()
            .map(|r| r.iter().map(|q| q.degree().unwrap()).collect())
            .collect();
        assert_eq!(degs, vec![vec![2, 3, 4], vec![1, 2, 3, 4]]);
        assert!(s.polys.iter().flatten().all(MultiPoly::is_homogeneous));
        assert_eq!(s, random_tuple(&running(), 5, 3, DEFAULT_CAP).unwrap());
        assert_ne!(s, random_tuple(&running(), 5, 4, DEFAULT_CAP).unwrap());
    }

    #[test]
    fn budget_and_prime_checks() {
        assert!(matches!(
            random_tuple(&running(), 5, 0, 390_624),
            Err(FieldError::Budget { .. })
        ));
        assert!(random_tuple(&running(), 5, 0, 390_625).is_ok());
        assert_eq!(
            random_tuple(&running(), 6, 0, DEFAULT_CAP),
            Err(FieldError::NotPrime(6))
        );
    }

    #[test]
    fn repeated_forms_reuse_earlier_forms() {
        let s = sample_tuple(&running(), 5, 7, SampleKind::RepeatedForms, DEFAULT_CAP).unwrap();
        let z1 = MultiPoly::variable(0, 8, 5);
        assert_eq!(s.polys[1][0], z1);
        assert_eq!(s.polys[1][1], s.polys[0][0]);
        assert_eq!(s.polys[1][2], s.polys[0][1]);
        assert_eq!(s.polys[1][3], s.polys[0][2]);
        let p = validate_shape(2, 5, &[3, 4], &[1, 2]).unwrap();
        let s = sample_tuple(&p, 5, 7, SampleKind::RepeatedForms, DEFAULT_CAP).unwrap();
        assert_eq!(s.polys[1][0], s.polys[0][1]);
        let z1 = MultiPoly::variable(0, 7, 5);
        assert_eq!(s.polys[1][2], &z1 * &s.polys[0][2]);
    }

    #[test]
    fn dump_round_trips() {
        for kind in [
            SampleKind::Random,
            SampleKind::RepeatedForms,
            SampleKind::FirstVariablePowers,
        ] {
            let s = sample_tuple(&running(), 5, 11, kind, DEFAULT_CAP).unwrap();
            let text = s.dump();
            let back = TupleSample::parse(&text).unwrap();
            assert_eq!(back, s);
            assert_eq!(back.dump(), text);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        let s = random_tuple(&running(), 5, 1, DEFAULT_CAP).unwrap();
        let text = s.dump();
        assert!(TupleSample::parse("").is_err());
        assert!(TupleSample::parse(&text.replace("prime 5", "prime 4")).is_err());
        assert!(TupleSample::parse(&text.replace("form 2 1", "form 2 2")).is_err());
        let truncated: String = text.lines().take(12).map(|l| format!("{l}\n")).collect();
        assert!(matches!(TupleSample::parse(&truncated), Err(FieldError::Parse(_))));
        assert!(TupleSample::parse(&format!("{text}extra\n")).is_err());
    }
}
