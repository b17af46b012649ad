//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rigidity_lab::codim::{
    assemble_codim_report, b_plus_line_check, balanced_degrees, line_conditions, line_conditions_below_top,
    minimize_sum_deg, phi1, phi2, standard_degrees, sum_deg,
};
use rigidity_lab::explorer::{enumerate_admissible, with_workers, AdmissibleRecord, ExploreConfig};
use rigidity_lab::finitefield::{
    check_regularity_batch, monomials_of_degree, shift_expand, shift_expand_direct, Fp, MultiPoly, SampleKind,
    DEFAULT_CAP,
};
use rigidity_lab::hypertangent::{build_schedule, ratio_chain, slope_product};
use rigidity_lab::params::{check_main_inequality, validate_shape, RigidityParams};
use std::time::{Duration, Instant};

const TELESCOPING_BUDGET: Duration = Duration::from_secs(10);
const MINIMIZER_BUDGET: Duration = Duration::from_secs(30);
const REGULARITY_BUDGET: Duration = Duration::from_secs(60);
const MIN_PASS_RATE: (usize, usize) = (9, 10);

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn rat(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: &num_bigint::BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

/// Every admissible tuple with `k = 2, 3` and `M ≤ 20`.
fn full_enumeration() -> Vec<AdmissibleRecord> {
    let cfg = ExploreConfig::default();
    let mut all = enumerate_admissible(2, 0..=20, &cfg).expect("k = 2 enumeration");
    all.extend(enumerate_admissible(3, 0..=20, &cfg).expect("k = 3 enumeration"));
    all
}

/// Slopes read straight off the truncation levels: one divisor per
/// `(i, α)` with `ξ_i ≤ α ≤ d_i − 1`, slope `(α + 1) / α`, largest first.
fn slopes_by_direct_count(p: &RigidityParams) -> Vec<BigRational> {
    let mut levels: Vec<u64> = p
        .pairs()
        .flat_map(|(d, xi)| (u64::from(xi)..u64::from(d)).collect::<Vec<_>>())
        .collect();
    levels.sort_unstable();
    levels.into_iter().map(|a| rat(a + 1, a)).collect()
}

fn telescoping(records: &[AdmissibleRecord]) -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for r in records {
        let p = &r.params;
        let schedule = build_schedule(p);
        let direct = slopes_by_direct_count(p);
        let product: BigRational = direct.iter().product();
        let ok = schedule.slopes() == direct
            && slope_product(&schedule) * int(p.mu()) == int(p.deg_v())
            && product * int(p.mu()) == int(p.deg_v());
        if !ok {
            bad.push(p.to_string());
        }
    }
    let elapsed = start.elapsed();
    outcome(
        bad.is_empty() && records.len() >= 1000 && elapsed < TELESCOPING_BUDGET,
        format!("{} tuples, {} mismatches, {:.2?}", records.len(), bad.len(), elapsed),
    )
}

fn exclusion(records: &[AdmissibleRecord]) -> Outcome {
    let mut bad = 0;
    let mut below_one = 0;
    for r in records {
        let p = &r.params;
        let slopes = slopes_by_direct_count(p);
        let chain = ratio_chain(p, &build_schedule(p));
        if slopes.len() >= 2 && chain.final_bound != rat(4, 1) / (&slopes[0] * &slopes[1]) {
            bad += 1;
        }
        if chain.final_bound < rat(1, 1) {
            below_one += 1;
        }
    }
    let witness = validate_shape(2, 6, &[4, 4], &[2, 1]).unwrap();
    let w = ratio_chain(&witness, &build_schedule(&witness)).final_bound;
    outcome(
        bad == 0 && below_one == 0 && w == rat(4, 3),
        format!("{bad} closed-form mismatches, {below_one} below 1, witness {w}"),
    )
}

/// `♯{(j, α) : ξ ≤ j ≤ top, 0 ≤ α ≤ j}` by counting.
fn count_conditions(xi: u32, top: u32) -> i64 {
    (xi..=top).map(|j| i64::from(j) + 1).sum()
}

fn degree_identities(records: &[AdmissibleRecord]) -> Outcome {
    let mut bad = Vec::new();
    for r in records {
        let p = &r.params;
        let degrees = standard_degrees(p).expect("standard degrees");
        let direct: i64 = p
            .degrees()
            .as_slice()
            .iter()
            .flat_map(|&d| 2..=i64::from(d))
            .sum::<i64>()
            - i64::from(p.degrees().last());
        let (dk, xik) = p.pairs().last().unwrap();
        let all_lines = line_conditions(dk, xik);
        let ok = degrees.len() == p.m() as usize - 1
            && sum_deg(p) == degrees.sum()
            && sum_deg(p) == direct
            && all_lines == count_conditions(xik, dk)
            && line_conditions_below_top(dk, xik) == count_conditions(xik, dk - 1)
            && all_lines - (i64::from(dk) + 1) == line_conditions_below_top(dk, xik)
            && b_plus_line_check(p).holds == check_main_inequality(p).holds;
        if !ok {
            bad.push(p.to_string());
        }
    }
    outcome(
        bad.is_empty(),
        format!("{} tuples, {} mismatches", records.len(), bad.len()),
    )
}

/// Sorted vectors of `k` entries `≥ 2` summing to `total`, built recursively.
fn sorted_vectors(k: usize, total: u32, floor: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if k == 0 {
        if total == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    let mut x = floor;
    while x * k as u32 <= total {
        prefix.push(x);
        sorted_vectors(k - 1, total - x, x, prefix, out);
        prefix.pop();
        x += 1;
    }
}

fn minimizer() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    let mut bad = Vec::new();
    for k in 1..=5usize {
        for m in (k.max(2) as u32)..=30 {
            let mut vectors = Vec::new();
            sorted_vectors(k, m + k as u32, 2, &mut Vec::new(), &mut vectors);
            let value = |d: &Vec<u32>| -> i64 {
                d.iter().flat_map(|&x| 2..=i64::from(x)).sum::<i64>() - i64::from(*d.last().unwrap())
            };
            let oracle_min = vectors.iter().map(value).min().unwrap();
            let oracle_argmin: Vec<&Vec<u32>> = vectors.iter().filter(|d| value(d) == oracle_min).collect();
            let found = minimize_sum_deg(k, m);
            let balanced = balanced_degrees(k, m).as_slice().to_vec();
            let ok = found.min_value == oracle_min
                && found
                    .argmin
                    .iter()
                    .map(|d| d.as_slice())
                    .eq(oracle_argmin.iter().map(|d| d.as_slice()))
                && found.min_value >= 2 * i64::from(m) - 2
                && found.balanced_attains
                && oracle_argmin.contains(&&balanced);
            cases += 1;
            if !ok {
                bad.push(format!("k={k} M={m}"));
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        bad.is_empty() && elapsed < MINIMIZER_BUDGET,
        format!("{cases} (k, M) cases, failures {bad:?}, {elapsed:.2?}"),
    )
}

fn phi_endpoints() -> Outcome {
    let mut bad = Vec::new();
    for m in 5..=200i64 {
        if phi1(m - 3, m) != m + 3 || phi2(m - 2, m) != m + 1 {
            bad.push(format!("M={m}"));
        }
    }
    // (k+3)(M−k−2)+1 ≥ M+1 at M = 2k+1 and M = 2k+2.
    for k in 2..=50i64 {
        let odd = (k + 3) * (k - 1) + 1;
        let even = (k + 3) * k + 1;
        let ok =
            odd >= 2 * k + 2 && even >= 2 * k + 3 && phi2(k + 1, 2 * k + 1) == odd && phi2(k + 1, 2 * k + 2) == even;
        if !ok {
            bad.push(format!("k={k}"));
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "endpoints M=5..=200, boundary k=2..=50, k=2 odd case {} >= 6, failures {bad:?}",
            phi2(3, 5)
        ),
    )
}

fn assembly(records: &[AdmissibleRecord]) -> Outcome {
    let mut bad = Vec::new();
    for r in records {
        let p = &r.params;
        let target = BigInt::from(p.m() + p.k() as u32 + 1);
        let report = assemble_codim_report(p).expect("report");
        let total = report.get("total").expect("total record");
        let identity = report.get("total_identity").expect("identity record");
        if total.value < target || identity.value != target || !report.certified {
            bad.push(p.to_string());
        }
    }
    outcome(
        bad.is_empty(),
        format!("{} tuples, {} failures", records.len(), bad.len()),
    )
}

fn random_homogeneous(rng: &mut ChaCha8Rng, nvars: usize, deg: u32, p: u64) -> MultiPoly {
    let terms = monomials_of_degree(nvars, deg)
        .into_iter()
        .filter_map(|e| rng.gen_bool(0.6).then(|| (e, rng.gen_range(0..p))))
        .collect::<Vec<_>>();
    MultiPoly::from_terms(nvars, p, terms)
}

fn shift_correctness() -> Outcome {
    const P: u64 = 101;
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut mismatches = 0;
    let mut points = 0;
    for _ in 0..100 {
        let nvars = rng.gen_range(1..=5usize);
        let top = rng.gen_range(0..=6u32);
        let lowest = rng.gen_range(0..=top);
        let components: Vec<MultiPoly> = (lowest..=top)
            .map(|deg| random_homogeneous(&mut rng, nvars, deg, P))
            .collect();
        let phis = shift_expand(lowest, &components).expect("graded input");
        if phis != shift_expand_direct(lowest, &components).expect("graded input") {
            mismatches += 1;
        }
        for _ in 0..100 {
            let u: Vec<Fp> = (0..nvars).map(|_| Fp::new(rng.gen_range(0..P), P)).collect();
            let mut z = u.clone();
            z[0] = z[0] + Fp::one(P);
            let shifted = phis.iter().fold(Fp::zero(P), |acc, f| acc + f.eval(&u));
            let original = components.iter().fold(Fp::zero(P), |acc, f| acc + f.eval(&z));
            points += 1;
            if shifted != original {
                mismatches += 1;
            }
        }
    }
    outcome(
        mismatches == 0,
        format!("100 polynomials over F_101, {points} points, {mismatches} mismatches"),
    )
}

fn regularity_oracle() -> Outcome {
    let start = Instant::now();
    let params = validate_shape(2, 6, &[4, 4], &[2, 1]).unwrap();
    let factor = rat(4, 1);
    let seeds: Vec<u64> = (0..100).collect();
    let run = |kind| {
        with_workers(Some(1), || {
            check_regularity_batch(&params, 5, &seeds, kind, &factor, DEFAULT_CAP)
        })
        .expect("pool")
        .expect("within budget")
    };
    let random = run(SampleKind::Random);
    let repeated = run(SampleKind::RepeatedForms);
    let elapsed = start.elapsed();
    let rate_ok = random.passes * MIN_PASS_RATE.1 >= random.trials * MIN_PASS_RATE.0;
    outcome(
        rate_ok && repeated.passes == 0 && elapsed < REGULARITY_BUDGET,
        format!(
            "random {}/{} pass, repeated {}/{} pass, {:.2?} on one thread",
            random.passes, random.trials, repeated.passes, repeated.trials, elapsed
        ),
    )
}

fn cli_bytes(args: &[&str]) -> (i32, Vec<u8>, Vec<u8>) {
    let mut full = vec!["rigidity-lab"];
    full.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = rigidity_lab::cli::run(full, &mut out, &mut err);
    (code, out, err)
}

fn determinism() -> Outcome {
    let explore = ["explore", "--k", "3", "--m-max", "12"];
    let ff = [
        "ff-check", "--k", "2", "--M", "5", "--d", "3,4", "--xi", "2,1", "--prime", "3", "--trials", "12", "--seed",
        "4",
    ];
    let mut cases = 0;
    let mut differing = Vec::new();
    for (name, base) in [("explore", &explore[..]), ("ff-check", &ff[..])] {
        for format in ["json", if name == "explore" { "csv" } else { "human" }] {
            let mut outputs = Vec::new();
            for workers in ["1", "2", "1", "2"] {
                let mut args = base.to_vec();
                args.extend(["--format", format, "--parallel", workers]);
                outputs.push(cli_bytes(&args));
            }
            cases += 1;
            if outputs.iter().any(|o| *o != outputs[0]) || outputs[0].0 != 0 {
                differing.push(format!("{name} {format}"));
            }
        }
    }
    outcome(
        differing.is_empty(),
        format!("{cases} command/format pairs, 2 reruns x workers 1 and 2, differing {differing:?}"),
    )
}

fn main() {
    let records = full_enumeration();
    let criteria: Vec<Criterion> = vec![
        ("telescoping identity", Box::new(|| telescoping(&records))),
        ("exclusion certificate", Box::new(|| exclusion(&records))),
        (
            "degree and line-count identities",
            Box::new(|| degree_identities(&records)),
        ),
        ("degree-sum minimizer", Box::new(minimizer)),
        ("quadratic endpoints and k boundary", Box::new(phi_endpoints)),
        ("codimension assembly", Box::new(|| assembly(&records))),
        ("coordinate shift", Box::new(shift_correctness)),
        ("regularity oracle", Box::new(regularity_oracle)),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {}. {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
