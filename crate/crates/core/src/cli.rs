//! Command-line front end.
//!
//! Exit codes: 0 every check passed, 1 a check failed, 2 invalid input,
//! 3 resource limit or internal error.

use crate::arith::{int_json, render_rational, Verdict};
use crate::codim::assemble_codim_report;
use crate::explorer::{
    self, enumerate_admissible, export_report, summarize, ExploreConfig, ExploreError, ReportFormat,
};
use crate::finitefield::{self, check_regularity_batch, require_prime, sample_tuple, FieldError, SampleKind};
use crate::hypertangent::{build_schedule, certify_exclusion, ratio_chain, slope_product, Certificate};
use crate::params::{check_dimension_inequality, check_main_inequality, validate_shape, RigidityParams};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Environment variable overriding every enumeration cap.
pub const CAP_ENV: &str = "RIGIDITY_LAB_CAP";

pub const TOOL: &str = "rigidity-lab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "rigidity-lab",
    version,
    about = "Exact checks of the numerical conditions for superrigidity of singular Fano complete intersections"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every check on one parameter tuple.
    Verify(ParamArgs),
    /// Print the hypertangent schedule, slopes and ratio chain.
    Schedule(ParamArgs),
    /// Print the codimension bookkeeping.
    Codim(ParamArgs),
    /// Enumerate admissible tuples and write a CSV or JSON report.
    Explore(ExploreArgs),
    /// Point-count test of the regular-sequence condition on random tuples.
    FfCheck(FfArgs),
}

#[derive(Debug, Args, Clone, Default)]
pub struct CommonArgs {
    /// `key = value` file supplying any option; flags win on conflict.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `human` or `json` (`csv` or `json` for explore).
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct ParamArgs {
    /// Number of equations.
    #[arg(long)]
    pub k: Option<usize>,
    /// Dimension of the variety.
    #[arg(long = "M", visible_alias = "m")]
    pub m: Option<u32>,
    /// Degrees, comma separated and non-decreasing.
    #[arg(long)]
    pub d: Option<String>,
    /// Multiplicities at the point, comma separated, paired with the degrees.
    #[arg(long)]
    pub xi: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args, Clone, Default)]
pub struct ExploreArgs {
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long = "m-min")]
    pub m_min: Option<u32>,
    #[arg(long = "m-max")]
    pub m_max: Option<u32>,
    /// Worker threads.
    #[arg(long)]
    pub parallel: Option<usize>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args, Clone, Default)]
pub struct FfArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub prime: Option<u64>,
    /// Number of seeds, starting at `--seed`.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Factor in `N(s′) ≤ factor · p^(N−s′)`, an integer or `p/q`.
    #[arg(long)]
    pub threshold: Option<String>,
    /// `random`, `repeated` or `z1-powers`.
    #[arg(long)]
    pub sample: Option<String>,
    /// Pass rate required for exit code 0, an integer or `p/q`.
    #[arg(long = "min-pass-rate")]
    pub min_pass_rate: Option<String>,
    /// Write the first sample in the dump format.
    #[arg(long = "dump-sample")]
    pub dump_sample: Option<PathBuf>,
    #[arg(long)]
    pub parallel: Option<usize>,
}

/// Why a command stopped before producing a report.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Resource(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Resource(_) | Failure::Internal(_) => EXIT_RESOURCE,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "invalid input: {m}"),
            Failure::Resource(m) => write!(f, "resource limit: {m}"),
            Failure::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<FieldError> for Failure {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::Budget { .. } => Failure::Resource(e.to_string()),
            FieldError::NotPrime(_) | FieldError::Parse(_) => Failure::Usage(e.to_string()),
            FieldError::Grading(_) | FieldError::Ring(_) => Failure::Internal(e.to_string()),
        }
    }
}

impl From<ExploreError> for Failure {
    fn from(e: ExploreError) -> Self {
        match e {
            ExploreError::InvalidRange(_) => Failure::Usage(e.to_string()),
            ExploreError::Resource { .. } => Failure::Resource(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

type Config = BTreeMap<String, String>;

/// Reads `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<Config, String> {
    let mut out = Config::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected `key = value`", n + 1))?;
        out.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(out)
}

fn load_config(path: &Option<PathBuf>) -> Result<Config, Failure> {
    match path {
        None => Ok(Config::new()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", p.display())))?;
            parse_config(&text).map_err(Failure::Usage)
        }
    }
}

/// Fills an unset flag from the config file.
fn fill<T: FromStr>(slot: &mut Option<T>, cfg: &Config, key: &str) -> Result<(), Failure>
where
    T::Err: fmt::Display,
{
    if slot.is_none() {
        if let Some(raw) = cfg.get(key) {
            let v = raw
                .parse()
                .map_err(|e| Failure::Usage(format!("config key {key}: {e}")))?;
            *slot = Some(v);
        }
    }
    Ok(())
}

fn fill_common(c: &mut CommonArgs, cfg: &Config) -> Result<(), Failure> {
    fill(&mut c.out, cfg, "out")?;
    fill(&mut c.format, cfg, "format")
}

fn fill_params(a: &mut ParamArgs, cfg: &Config) -> Result<(), Failure> {
    fill(&mut a.k, cfg, "k")?;
    fill(&mut a.m, cfg, "M")?;
    fill(&mut a.m, cfg, "m")?;
    fill(&mut a.d, cfg, "d")?;
    fill(&mut a.xi, cfg, "xi")?;
    fill_common(&mut a.common, cfg)
}

fn parse_list(raw: &str, name: &str) -> Result<Vec<u32>, Failure> {
    raw.split(',')
        .map(|x| {
            x.trim()
                .parse::<u32>()
                .map_err(|_| Failure::Usage(format!("--{name}: {x:?} is not a non-negative integer")))
        })
        .collect()
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("missing required --{flag}")))
}

fn params_from(a: &ParamArgs) -> Result<RigidityParams, Failure> {
    let k = required(a.k, "k")?;
    let m = required(a.m, "M")?;
    let d = parse_list(&required(a.d.clone(), "d")?, "d")?;
    let xi = parse_list(&required(a.xi.clone(), "xi")?, "xi")?;
    validate_shape(k, m, &d, &xi).map_err(|e| Failure::Usage(e.to_string()))
}

fn positive_rational(raw: &str, flag: &str) -> Result<BigRational, Failure> {
    let r = BigRational::from_str(raw.trim())
        .map_err(|_| Failure::Usage(format!("--{flag}: {raw:?} is not a rational")))?;
    if !r.is_positive() {
        return Err(Failure::Usage(format!("--{flag} must be positive")));
    }
    Ok(r)
}

/// Cap from the environment, if set.
fn env_cap() -> Result<Option<u64>, Failure> {
    match std::env::var(CAP_ENV) {
        Err(_) => Ok(None),
        Ok(raw) => raw
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("{CAP_ENV}={raw:?} is not a non-negative integer"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Relation {
    AtLeast,
    Equal,
}

/// One line of a report: `value relation threshold`.
#[derive(Clone, Debug)]
struct Check {
    name: String,
    value: Value,
    threshold: Value,
    relation: Relation,
    holds: bool,
}

impl Check {
    fn verdict(name: impl Into<String>, v: &Verdict) -> Self {
        Check {
            name: name.into(),
            value: int_json(&v.value),
            threshold: int_json(&v.threshold),
            relation: Relation::AtLeast,
            holds: v.holds,
        }
    }

    fn rational_at_least(name: &str, value: &BigRational, threshold: &BigRational) -> Self {
        Check {
            name: name.into(),
            value: Value::String(render_rational(value)),
            threshold: Value::String(render_rational(threshold)),
            relation: Relation::AtLeast,
            holds: value >= threshold,
        }
    }

    fn rational_equal(name: &str, value: &BigRational, expected: &BigRational) -> Self {
        Check {
            name: name.into(),
            value: Value::String(render_rational(value)),
            threshold: Value::String(render_rational(expected)),
            relation: Relation::Equal,
            holds: value == expected,
        }
    }

    fn human(&self) -> String {
        let rel = match (self.relation, self.holds) {
            (Relation::AtLeast, true) => "≥",
            (Relation::AtLeast, false) => "<",
            (Relation::Equal, true) => "=",
            (Relation::Equal, false) => "≠",
        };
        let status = if self.holds { "PASS" } else { "FAIL" };
        format!(
            "{} {} {rel} {} {status}",
            self.name,
            plain(&self.value),
            plain(&self.threshold)
        )
    }

    fn json(&self) -> Value {
        json!({
            "name": self.name,
            "value": self.value,
            "threshold": self.threshold,
            "relation": match self.relation { Relation::AtLeast => ">=", Relation::Equal => "=" },
            "holds": self.holds,
        })
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::Null => "none".into(),
        Value::Array(items) if items.is_empty() => "none".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(plain).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}

/// A finished report, rendered as text or as JSON from the same data.
struct Report {
    command: &'static str,
    input: Value,
    input_human: String,
    /// Command-specific data: `(key, value)` for JSON, shown as `key: value`.
    details: Vec<(String, Value)>,
    /// JSON-only details; `notes` carries their human rendering.
    tables: Vec<(String, Value)>,
    /// Extra human-only lines printed after the details.
    notes: Vec<String>,
    checks: Vec<Check>,
}

impl Report {
    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    fn verdict(&self) -> &'static str {
        if self.passed() {
            "pass"
        } else {
            "fail"
        }
    }

    fn human(&self) -> String {
        let mut out = format!("{TOOL} {}\n", self.command);
        out.push_str(&format!("input: {}\n", self.input_human));
        for (k, v) in &self.details {
            out.push_str(&format!("{k}: {}\n", plain(v)));
        }
        for n in &self.notes {
            out.push_str(n);
            out.push('\n');
        }
        for c in &self.checks {
            out.push_str(&c.human());
            out.push('\n');
        }
        out.push_str(&format!("verdict: {}\n", self.verdict().to_uppercase()));
        out
    }

    fn json(&self) -> String {
        let mut details = Map::new();
        for (k, v) in self.details.iter().chain(&self.tables) {
            details.insert(k.clone(), v.clone());
        }
        let doc = json!({
            "tool": TOOL,
            "version": VERSION,
            "command": self.command,
            "input": self.input,
            "details": Value::Object(details),
            "checks": self.checks.iter().map(Check::json).collect::<Vec<_>>(),
            "verdict": self.verdict(),
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }
}

fn params_input(p: &RigidityParams) -> Value {
    json!({
        "k": p.k(),
        "M": p.m(),
        "d": p.degrees().as_slice(),
        "xi": p.multiplicities().as_slice(),
    })
}

fn rationals_json(rs: &[BigRational]) -> Value {
    Value::Array(rs.iter().map(|r| Value::String(render_rational(r))).collect())
}

fn big(n: &num_bigint::BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

fn schedule_details(p: &RigidityParams) -> (Vec<(String, Value)>, Vec<String>, Vec<Check>) {
    let s = build_schedule(p);
    let chain = ratio_chain(p, &s);
    let cert: Certificate = certify_exclusion(&chain);
    let product = slope_product(&s);
    let mut details = vec![
        ("a".to_string(), s.first_level().map_or(Value::Null, Value::from)),
        ("c".to_string(), json!(s.c_table())),
        ("m_by_level".to_string(), json!(s.m_table())),
        ("m_total".to_string(), json!(s.m_total())),
        ("slopes".to_string(), rationals_json(&s.slopes())),
        ("slope_product".to_string(), Value::String(render_rational(&product))),
        ("seed_ratio".to_string(), Value::String(render_rational(&chain.seed))),
        (
            "chain".to_string(),
            rationals_json(&chain.steps.iter().map(|st| st.bound.clone()).collect::<Vec<_>>()),
        ),
        (
            "final_bound".to_string(),
            Value::String(render_rational(&chain.final_bound)),
        ),
        ("margin".to_string(), Value::String(render_rational(&cert.margin))),
    ];
    let mut notes = Vec::new();
    if s.is_degenerate() {
        notes.push("degenerate schedule: every equation is a cone at the point, no hypertangent divisors".into());
        details.push(("degenerate".to_string(), Value::Bool(true)));
    }
    if chain.short_chain {
        notes.push("short chain: fewer than three divisors, the bound is the seed ratio".into());
    }
    let checks = vec![
        Check::rational_equal("telescoping", &(&product * big(p.mu())), &big(p.deg_v())),
        Check::rational_at_least("final_bound", &chain.final_bound, &BigRational::from_integer(1.into())),
    ];
    (details, notes, checks)
}

fn cmd_verify(a: &ParamArgs) -> Result<Report, Failure> {
    let p = params_from(a)?;
    let mut checks = vec![
        Check::verdict("main_inequality", &check_main_inequality(&p)),
        Check::verdict("dimension_inequality", &check_dimension_inequality(&p)),
    ];
    let (details, notes, sched) = schedule_details(&p);
    checks.extend(sched);
    let codim = assemble_codim_report(&p).map_err(|e| Failure::Internal(e.to_string()))?;
    checks.extend(codim.records.iter().map(|r| Check::verdict(r.name.clone(), &r.verdict)));
    checks.push(span_case_consistency(&codim.span_case_divergences));
    let keep = ["m_total", "slopes", "final_bound", "margin"];
    Ok(Report {
        command: "verify",
        input: params_input(&p),
        input_human: p.to_string(),
        tables: Vec::new(),
        details: details
            .into_iter()
            .filter(|(k, _)| keep.contains(&k.as_str()))
            .collect(),
        notes,
        checks,
    })
}

fn span_case_consistency(divergences: &[usize]) -> Check {
    Check {
        name: "span_case_consistent".into(),
        value: json!(divergences.len()),
        threshold: json!(0),
        relation: Relation::Equal,
        holds: divergences.is_empty(),
    }
}

fn cmd_schedule(a: &ParamArgs) -> Result<Report, Failure> {
    let p = params_from(a)?;
    let (details, notes, checks) = schedule_details(&p);
    Ok(Report {
        command: "schedule",
        input: params_input(&p),
        input_human: p.to_string(),
        tables: Vec::new(),
        details,
        notes,
        checks,
    })
}

fn cmd_codim(a: &ParamArgs) -> Result<Report, Failure> {
    let p = params_from(a)?;
    let codim = assemble_codim_report(&p).map_err(|e| Failure::Internal(e.to_string()))?;
    let mut checks: Vec<Check> = codim
        .records
        .iter()
        .map(|r| Check::verdict(r.name.clone(), &r.verdict))
        .collect();
    checks.push(span_case_consistency(&codim.span_case_divergences));
    Ok(Report {
        command: "codim",
        input: params_input(&p),
        input_human: p.to_string(),
        tables: Vec::new(),
        details: vec![("span_case_divergences".to_string(), json!(codim.span_case_divergences))],
        notes: Vec::new(),
        checks,
    })
}

fn human_format(c: &CommonArgs) -> Result<bool, Failure> {
    match c.format.as_deref() {
        None | Some("human") => Ok(true),
        Some("json") => Ok(false),
        Some(other) => Err(Failure::Usage(format!("--format {other:?}: expected human or json"))),
    }
}

fn emit(text: &str, dest: &Option<PathBuf>, out: &mut dyn Write) -> Result<(), Failure> {
    match dest {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Internal(format!("{}: {e}", path.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Internal(e.to_string())),
    }
}

fn finish(report: &Report, common: &CommonArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let text = if human_format(common)? {
        report.human()
    } else {
        report.json()
    };
    emit(&text, &common.out, out)?;
    Ok(if report.passed() { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_explore(mut a: ExploreArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let cfg = load_config(&a.common.config)?;
    fill(&mut a.k, &cfg, "k")?;
    fill(&mut a.m_min, &cfg, "m-min")?;
    fill(&mut a.m_max, &cfg, "m-max")?;
    fill(&mut a.parallel, &cfg, "parallel")?;
    fill_common(&mut a.common, &cfg)?;
    let k = required(a.k, "k")?;
    let m_min = a.m_min.unwrap_or(2 * k as u32 + 1);
    let m_max = required(a.m_max, "m-max")?;
    let format = match a.common.format.as_deref() {
        None => ReportFormat::Csv,
        Some(f) => f.parse().map_err(Failure::Usage)?,
    };
    if a.parallel == Some(0) {
        return Err(Failure::Usage("--parallel must be at least 1".into()));
    }
    let config = ExploreConfig {
        cap: env_cap()?.unwrap_or(explorer::DEFAULT_CAP),
        workers: a.parallel,
    };
    let records = enumerate_admissible(k, m_min..=m_max, &config)?;
    let summary = summarize(&records);
    let mut buf = Vec::new();
    export_report(&records, format, &mut buf)?;
    let text = String::from_utf8(buf).map_err(|e| Failure::Internal(e.to_string()))?;
    emit(&text, &a.common.out, out)?;
    let line = format!(
        "explored k={k} M={m_min}..{m_max}: {} admissible, {} failures, max mu/d {}\n",
        summary.count,
        summary.failures.len(),
        summary
            .max_ratio
            .as_ref()
            .map_or("n/a".to_string(), |(r, p)| format!("{} at {p}", render_rational(r)))
    );
    // The report owns stdout unless it went to a file.
    let side: &mut dyn Write = if a.common.out.is_some() { out } else { err };
    side.write_all(line.as_bytes())
        .map_err(|e| Failure::Internal(e.to_string()))?;
    Ok(if summary.failures.is_empty() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}

fn cmd_ffcheck(mut a: FfArgs) -> Result<(Report, CommonArgs), Failure> {
    let cfg = load_config(&a.params.common.config)?;
    fill_params(&mut a.params, &cfg)?;
    fill(&mut a.prime, &cfg, "prime")?;
    fill(&mut a.trials, &cfg, "trials")?;
    fill(&mut a.seed, &cfg, "seed")?;
    fill(&mut a.threshold, &cfg, "threshold")?;
    fill(&mut a.sample, &cfg, "sample")?;
    fill(&mut a.min_pass_rate, &cfg, "min-pass-rate")?;
    fill(&mut a.dump_sample, &cfg, "dump-sample")?;
    fill(&mut a.parallel, &cfg, "parallel")?;
    let p = params_from(&a.params)?;
    let prime = a.prime.unwrap_or(finitefield::DEFAULT_PRIME);
    require_prime(prime)?;
    let trials = a.trials.unwrap_or(20);
    if trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    let first_seed = a.seed.unwrap_or(0);
    let seeds: Vec<u64> = (0..trials)
        .map(|t| first_seed.checked_add(t))
        .collect::<Option<_>>()
        .ok_or_else(|| Failure::Usage("seed range overflows".into()))?;
    let factor = positive_rational(a.threshold.as_deref().unwrap_or("4"), "threshold")?;
    let min_rate = positive_rational(a.min_pass_rate.as_deref().unwrap_or("9/10"), "min-pass-rate")?;
    let kind: SampleKind = a
        .sample
        .as_deref()
        .unwrap_or("random")
        .parse()
        .map_err(Failure::Usage)?;
    if a.parallel == Some(0) {
        return Err(Failure::Usage("--parallel must be at least 1".into()));
    }
    let cap = env_cap()?.unwrap_or(finitefield::DEFAULT_CAP);
    if let Some(path) = &a.dump_sample {
        let sample = sample_tuple(&p, prime, first_seed, kind, cap)?;
        std::fs::write(path, sample.dump()).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))?;
    }
    let stats = explorer::with_workers(a.parallel, || {
        check_regularity_batch(&p, prime, &seeds, kind, &factor, cap)
    })
    .map_err(Failure::Internal)??;

    let nvars = p.m() as usize + p.k();
    let forms = stats.per_seed.first().map_or(0, |(_, v)| v.counts.len() - 1);
    let mut notes = vec![format!(
        "{:>6} {:>12} {:>12} {:>10} {:>10}",
        "prefix", "threshold", "mean", "min", "max"
    )];
    let mut prefixes = Vec::new();
    for (s, dist) in stats.count_distributions.iter().enumerate() {
        let threshold = &stats.per_seed[0].1.thresholds[s];
        let mean = stats.mean_count(s);
        let min = dist.keys().next().copied().unwrap_or(0);
        let max = dist.keys().next_back().copied().unwrap_or(0);
        notes.push(format!(
            "{s:>6} {:>12} {:>12} {min:>10} {max:>10}",
            render_rational(threshold),
            render_rational(&mean)
        ));
        prefixes.push(json!({
            "prefix": s,
            "threshold": render_rational(threshold),
            "mean": render_rational(&mean),
            "min": min,
            "max": max,
        }));
    }
    let mut per_seed = Vec::new();
    for (seed, v) in &stats.per_seed {
        let counts = v.counts.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        notes.push(format!("seed {seed} {} {counts}", if v.pass { "PASS" } else { "FAIL" }));
        per_seed.push(json!({
            "seed": seed,
            "pass": v.pass,
            "counts": v.counts,
            "first_failure": v.first_failure,
        }));
    }
    let input = json!({
        "k": p.k(),
        "M": p.m(),
        "d": p.degrees().as_slice(),
        "xi": p.multiplicities().as_slice(),
        "prime": prime,
        "seed": first_seed,
        "trials": trials,
        "threshold": render_rational(&factor),
        "sample": kind.name(),
    });
    let details = vec![
        ("variables".to_string(), json!(nvars)),
        ("forms".to_string(), json!(forms)),
        ("passes".to_string(), json!(stats.passes)),
    ];
    let rate = if stats.trials == 0 {
        BigRational::zero()
    } else {
        stats.pass_rate.clone()
    };
    let checks = vec![Check::rational_at_least("pass_rate", &rate, &min_rate)];
    let input_human = format!(
        "{p} prime={prime} seed={first_seed} trials={trials} threshold={} sample={kind}",
        render_rational(&factor)
    );
    let report = Report {
        command: "ff-check",
        input,
        input_human,
        details,
        tables: vec![
            ("prefixes".to_string(), Value::Array(prefixes)),
            ("seeds".to_string(), Value::Array(per_seed)),
        ],
        notes,
        checks,
    };
    Ok((report, a.params.common))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(rendered.as_bytes());
            return if code == 0 { EXIT_PASS } else { EXIT_USAGE };
        }
    };
    let result = match cli.command {
        Command::Verify(a) => with_params(a, cmd_verify, out),
        Command::Schedule(a) => with_params(a, cmd_schedule, out),
        Command::Codim(a) => with_params(a, cmd_codim, out),
        Command::Explore(a) => cmd_explore(a, out, err),
        Command::FfCheck(a) => cmd_ffcheck(a).and_then(|(report, common)| finish(&report, &common, out)),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "{TOOL}: {f}");
            f.code()
        }
    }
}

fn with_params(
    mut a: ParamArgs,
    cmd: fn(&ParamArgs) -> Result<Report, Failure>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let cfg = load_config(&a.common.config)?;
    fill_params(&mut a, &cfg)?;
    human_format(&a.common)?;
    let report = cmd(&a)?;
    finish(&report, &a.common, out)
}
