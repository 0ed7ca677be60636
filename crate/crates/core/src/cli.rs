//! The `tverberg` command-line frontend. Every command prints one JSON
//! report; `--pretty` switches to plain text.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::combin::factorial;
use crate::convex::{enumerate_tverberg_partitions, moment_curve, sierksma_configuration};
use crate::error::{Error, Result};
use crate::predicate::{
    eval_statement, parity_cross_check, parse_statement, random_homogeneous_sequence, scan_unavoidability,
    ConvexPosition, Not, Predicate, SequenceFamily, SixPoint, StatementPredicate, TypePredicate,
};
use crate::sequence::PointSequence;
use crate::stair::{enumerate_stair_tverberg, StairMethod};
use crate::stretched::{check_transference, default_side, random_far_samples, stretched_diagonal};
use crate::types::{
    colorful_count, enumerate_333_intersecting, enumerate_colorful, enumerate_types, plane_side_predicates_3334,
    t_param, zigzag, TverbergType,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "TVERBERG_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "tverberg", version, about = "Tverberg types, stair-convexity and separation predicates")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Print plain-text tables instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,

    /// Include wall-clock timing in the report.
    #[arg(long, global = true)]
    timing: bool,

    /// Worker threads for parallel experiments.
    #[arg(long, global = true, env = WORKERS_ENV, default_value_t = 1)]
    workers: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate and classify Tverberg types.
    Types(TypesArgs),
    /// The (3,3,3) census and the (3,3,3,4) plane-side predicates.
    Appendix,
    /// Enumerate the Tverberg partitions of a point set.
    Tverberg(TverbergArgs),
    /// Enumerate the stair-Tverberg partitions of a point set.
    Stair(StairArgs),
    /// Transference and partition-count experiments on the stretched grid.
    Grid(GridArgs),
    /// Evaluate a separation statement, or cross-check the parity rule.
    Eval(EvalArgs),
    /// Search a sequence family for sequences avoiding a predicate.
    Scan(ScanArgs),
}

#[derive(Debug, Args)]
struct TypesArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    r: usize,
    /// Only colorful types.
    #[arg(long, conflicts_with = "non_colorful")]
    colorful: bool,
    /// Only non-colorful types.
    #[arg(long)]
    non_colorful: bool,
    /// Only types with two consecutive indices in one part.
    #[arg(long, conflicts_with = "no_consecutive")]
    consecutive: bool,
    /// Only types without two consecutive indices in one part.
    #[arg(long)]
    no_consecutive: bool,
    /// Only types with these part sizes, e.g. 3,3,3,4.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Only the zigzag type.
    #[arg(long)]
    zigzag: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FamilyKind {
    /// Moment curve at t = 1..n.
    Moment,
    /// Seeded random orientation-homogeneous sequence.
    Convex,
    /// Stretched diagonal.
    Diagonal,
    /// Clustered configuration with (r-1)!^d partitions; needs --r.
    Sierksma,
}

/// Where the points come from: a file or a generated family.
#[derive(Debug, Args)]
struct SourceArgs {
    /// Points file: CSV of p/q coordinates, or JSON with a .json extension.
    #[arg(long, conflicts_with = "family", required_unless_present = "family")]
    points: Option<PathBuf>,
    #[arg(long, value_enum)]
    family: Option<FamilyKind>,
    /// Dimension of a generated family.
    #[arg(long)]
    d: Option<usize>,
    /// Length of a generated family; defaults to T(d, r) where r is known.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SourceArgs {
    fn load(&self, r: Option<usize>) -> Result<(PointSequence, Value)> {
        if let Some(path) = &self.points {
            let seq = PointSequence::load(path)?;
            let name = path.file_name().map_or_else(String::new, |f| f.to_string_lossy().into_owned());
            return Ok((seq, json!({ "points": name })));
        }
        let kind = self.family.expect("clap enforces a source");
        let d = self
            .d
            .ok_or_else(|| Error::Precondition("--family needs --d".into()))?;
        let n = match (self.n, r) {
            (Some(n), _) => n,
            (None, Some(r)) => t_param(d, r),
            (None, None) => return Err(Error::Precondition("--family needs --n".into())),
        };
        let seq = match kind {
            FamilyKind::Moment => moment_curve(1..=n as i64, d),
            FamilyKind::Convex => random_homogeneous_sequence(d, n, self.seed)?,
            FamilyKind::Diagonal => stretched_diagonal(d, n)?.sequence()?,
            FamilyKind::Sierksma => {
                let r = r.ok_or_else(|| Error::Precondition("the sierksma family needs --r".into()))?;
                sierksma_configuration(d, r)?
            }
        };
        let mut params = json!({ "family": kind, "d": d, "n": seq.len() });
        if kind == FamilyKind::Convex {
            params["seed"] = json!(self.seed);
        }
        Ok((seq, params))
    }

    fn seed(&self) -> Option<u64> {
        (self.family == Some(FamilyKind::Convex)).then_some(self.seed)
    }
}

#[derive(Debug, Args)]
struct TverbergArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    r: usize,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
struct StairMethodArgs {
    /// Brute force over all partitions.
    #[arg(long)]
    oracle: bool,
    /// Recursive peeling (default).
    #[arg(long)]
    recursive: bool,
    /// Run both and compare.
    #[arg(long)]
    both: bool,
}

#[derive(Debug, Args)]
struct StairArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    r: usize,
    #[command(flatten)]
    method: StairMethodArgs,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    r: usize,
    /// The first T(d, r) diagonal points.
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    diagonal: bool,
    /// Random pairwise far-apart grid samples.
    #[arg(long)]
    random: bool,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Grid side for random samples; defaults to (2d+3) T(d, r).
    #[arg(long)]
    m: Option<u32>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Statement such as 25(1:X[14;36]).
    #[arg(required_unless_present = "parity")]
    statement: Option<String>,
    /// Compare the parity rule with evaluation on every point-only statement.
    #[arg(long, conflicts_with = "statement")]
    parity: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScanFamily {
    Moment,
    Convex,
    Diagonal,
}

#[derive(Debug, Args)]
struct ScanArgs {
    /// `sixpt`, `convex-position`, `tv:<encoding>`, `not:<predicate>`, or a
    /// statement.
    predicate: String,
    #[arg(long, value_enum)]
    family: ScanFamily,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    max_n: usize,
    /// Samples per length.
    #[arg(long, default_value_t = 100)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Whether the run found an invariant violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Ok,
    Violation,
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub elapsed_ms: u128,
    pub workers: usize,
}

/// Machine-readable result of one command.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub artifact_version: &'static str,
    pub command: &'static str,
    pub parameters: Value,
    pub seed: Option<u64>,
    pub counts: Map<String, Value>,
    pub lists: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl RunReport {
    fn new(command: &'static str, parameters: Value) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            artifact_version: env!("CARGO_PKG_VERSION"),
            command,
            parameters,
            seed: None,
            counts: Map::new(),
            lists: Map::new(),
            timing: None,
        }
    }

    fn count(&mut self, key: &str, value: impl Serialize) {
        self.counts.insert(key.into(), to_value(value));
    }

    fn list(&mut self, key: &str, value: impl Serialize) {
        self.lists.insert(key.into(), to_value(value));
    }

    /// Plain-text rendering: counts as aligned key/value rows, then one list
    /// item per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} (schema {}, v{})\n", self.command, self.schema_version, self.artifact_version);
        let flat = |v: &Value| match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        if let Value::Object(params) = &self.parameters {
            for (k, v) in params {
                out.push_str(&format!("  {k} = {}\n", flat(v)));
            }
        }
        if let Some(seed) = self.seed {
            out.push_str(&format!("  seed = {seed}\n"));
        }
        let width = self.counts.keys().map(String::len).max().unwrap_or(0);
        if !self.counts.is_empty() {
            out.push_str("\ncounts\n");
        }
        for (k, v) in &self.counts {
            out.push_str(&format!("  {k:<width$}  {}\n", flat(v)));
        }
        for (k, v) in &self.lists {
            out.push_str(&format!("\n{k}\n"));
            match v {
                Value::Array(items) => {
                    for item in items {
                        out.push_str(&format!("  {}\n", flat(item)));
                    }
                }
                other => out.push_str(&format!("  {}\n", flat(other))),
            }
        }
        if let Some(t) = &self.timing {
            out.push_str(&format!("\n{} ms on {} worker(s)\n", t.elapsed_ms, t.workers));
        }
        out
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn type_entry(t: &TverbergType) -> Value {
    json!({
        "encoding": t.encode(),
        "parts": t.to_string(),
        "sizes": t.part_sizes(),
        "colorful": t.is_colorful(),
        "consecutive_pair": t.has_consecutive_pair(),
        "mirror": t.mirror().encode(),
    })
}

fn cmd_types(a: &TypesArgs) -> Result<(RunReport, Outcome)> {
    let mut report = RunReport::new(
        "types",
        json!({
            "d": a.d, "r": a.r, "colorful": a.colorful, "non_colorful": a.non_colorful,
            "consecutive": a.consecutive, "no_consecutive": a.no_consecutive,
            "sizes": a.sizes, "zigzag": a.zigzag,
        }),
    );
    let candidates: Vec<TverbergType> = if a.zigzag {
        vec![zigzag(a.d, a.r)?]
    } else if a.colorful {
        enumerate_colorful(a.d, a.r)?
            .iter()
            .map(|e| TverbergType::decode(e.as_str(), a.d, a.r))
            .collect::<Result<_>>()?
    } else {
        enumerate_types(a.d, a.r)?
    };
    let sizes = a.sizes.clone().map(|mut s| {
        s.sort_unstable();
        s
    });
    let kept: Vec<&TverbergType> = candidates
        .iter()
        .filter(|t| !a.colorful || t.is_colorful())
        .filter(|t| !a.non_colorful || !t.is_colorful())
        .filter(|t| !a.consecutive || t.has_consecutive_pair())
        .filter(|t| !a.no_consecutive || !t.has_consecutive_pair())
        .filter(|t| sizes.as_ref().is_none_or(|s| &t.part_sizes() == s))
        .collect();
    report.count("types", kept.len());
    report.list("types", kept.iter().map(|t| type_entry(t)).collect::<Vec<_>>());
    Ok((report, Outcome::Ok))
}

fn cmd_appendix() -> Result<(RunReport, Outcome)> {
    let mut report = RunReport::new("appendix", json!({}));
    let census = enumerate_333_intersecting();
    let preds = plane_side_predicates_3334();
    report.count("total", census.total);
    report.count("interlacing", census.interlacing.len());
    report.count("colorful", census.colorful.len());
    report.count("consecutive", census.consecutive.len());
    report.count("residual", census.residual.len());
    report.count("residual_matches_printed", census.matches_printed_list);
    report.count("colorful_3334", crate::types::colorful_with_sizes(3, 4, &[3, 3, 3, 4])?.len());
    report.count("predicates_3334", preds.len());
    report.list("interlacing", &census.interlacing);
    report.list("colorful", &census.colorful);
    report.list("consecutive", &census.consecutive);
    report.list("residual", &census.residual);
    report.list("residual_parts", &census.residual_parts);
    report.list("predicates_3334", &preds);
    let outcome = if census.matches_printed_list { Outcome::Ok } else { Outcome::Violation };
    Ok((report, outcome))
}

fn cmd_tverberg(a: &TverbergArgs) -> Result<(RunReport, Outcome)> {
    let (seq, mut params) = a.source.load(Some(a.r))?;
    params["r"] = json!(a.r);
    let mut report = RunReport::new("tverberg", params);
    report.seed = a.source.seed();
    let found = enumerate_tverberg_partitions(&seq, a.r)?;
    report.count("partitions", found.len());
    report.count("colorful_count", colorful_count(seq.dim(), a.r));
    report.count("generic", seq.is_generic());
    report.list("partitions", &found);
    Ok((report, Outcome::Ok))
}

fn cmd_stair(a: &StairArgs) -> Result<(RunReport, Outcome)> {
    let (seq, mut params) = a.source.load(Some(a.r))?;
    let methods: &[StairMethod] = if a.method.both {
        &[StairMethod::Recursive, StairMethod::BruteForce]
    } else if a.method.oracle {
        &[StairMethod::BruteForce]
    } else {
        &[StairMethod::Recursive]
    };
    params["r"] = json!(a.r);
    params["methods"] = to_value(methods);
    let mut report = RunReport::new("stair", params);
    report.seed = a.source.seed();
    let results = methods
        .iter()
        .map(|&m| enumerate_stair_tverberg(&seq, a.r, m))
        .collect::<Result<Vec<_>>>()?;
    let agree = results.windows(2).all(|w| w[0] == w[1]);
    let first = &results[0];
    report.count("partitions", first.partitions.len());
    report.count("expected", factorial(a.r as u64 - 1).pow(seq.dim() as u32));
    report.count("methods_agree", agree);
    report.list("partitions", first.partitions.iter().map(type_entry).collect::<Vec<_>>());
    report.list("point", &first.point);
    Ok((report, if agree { Outcome::Ok } else { Outcome::Violation }))
}

fn cmd_grid(a: &GridArgs) -> Result<(RunReport, Outcome)> {
    let n = t_param(a.d, a.r);
    let expected = colorful_count(a.d, a.r);
    if a.diagonal {
        let sample = stretched_diagonal(a.d, n)?;
        let mut report = RunReport::new(
            "grid",
            json!({ "d": a.d, "r": a.r, "mode": "diagonal", "m": sample.grid.m }),
        );
        let t = check_transference(&sample, a.r)?;
        let mut census = t.euclidean.clone();
        census.sort();
        let census_is_colorful = census == enumerate_colorful(a.d, a.r)?;
        report.count("partitions_checked", t.partitions_checked);
        report.count("euclidean", t.euclidean.len());
        report.count("stair", t.stair.len());
        report.count("disagreements", t.disagreements.len());
        report.count("expected", expected);
        report.count("census_is_colorful", census_is_colorful);
        report.list("census", &census);
        report.list("disagreements", &t.disagreements);
        let ok = t.agrees() && census_is_colorful && t.euclidean.len() as u64 == expected;
        return Ok((report, if ok { Outcome::Ok } else { Outcome::Violation }));
    }
    let m = a.m.unwrap_or_else(|| default_side(a.d, n));
    let mut report = RunReport::new(
        "grid",
        json!({ "d": a.d, "r": a.r, "mode": "random", "m": m, "trials": a.trials }),
    );
    report.seed = Some(a.seed);
    let samples = random_far_samples(a.d, a.r, m, a.trials, a.seed)?;
    let mut distribution = std::collections::BTreeMap::<usize, usize>::new();
    let mut disagreements = Vec::new();
    for (i, s) in samples.iter().enumerate() {
        let t = check_transference(s, a.r)?;
        *distribution.entry(t.euclidean.len()).or_default() += 1;
        disagreements.extend(t.disagreements.iter().map(|e| json!({ "trial": i, "type": e })));
    }
    let constant = distribution.len() == 1 && distribution.contains_key(&(expected as usize));
    report.count("trials", samples.len());
    report.count("disagreements", disagreements.len());
    report.count("expected", expected);
    report.count("count_is_constant", constant);
    report.list(
        "count_distribution",
        distribution
            .iter()
            .map(|(c, k)| json!({ "partitions": c, "trials": k }))
            .collect::<Vec<_>>(),
    );
    report.list("disagreements", disagreements.clone());
    let ok = disagreements.is_empty() && constant;
    Ok((report, if ok { Outcome::Ok } else { Outcome::Violation }))
}

fn cmd_eval(a: &EvalArgs) -> Result<(RunReport, Outcome)> {
    let (seq, mut params) = a.source.load(None)?;
    if a.parity {
        params["parity"] = json!(true);
        let mut report = RunReport::new("eval", params);
        report.seed = a.source.seed();
        let p = parity_cross_check(&seq)?;
        report.count("checked", p.checked);
        report.count("disagreements", p.disagreements.len());
        report.list("disagreements", &p.disagreements);
        let outcome = if p.agrees() { Outcome::Ok } else { Outcome::Violation };
        return Ok((report, outcome));
    }
    let text = a.statement.as_deref().expect("clap enforces a statement");
    let s = parse_statement(text, seq.dim())?;
    params["statement"] = json!(s);
    let mut report = RunReport::new("eval", params);
    report.seed = a.source.seed();
    report.count("value", eval_statement(&seq, &s)?);
    Ok((report, Outcome::Ok))
}

/// Parse the predicate syntax accepted by `scan`.
fn parse_predicate(text: &str, d: usize) -> Result<Box<dyn Predicate>> {
    if let Some(rest) = text.strip_prefix("not:") {
        return Ok(Box::new(Not(parse_predicate(rest, d)?)));
    }
    if let Some(enc) = text.strip_prefix("tv:") {
        let r = enc.chars().collect::<std::collections::BTreeSet<_>>().len();
        return Ok(Box::new(TypePredicate(TverbergType::decode(enc, d, r)?)));
    }
    match text {
        "sixpt" if d == 2 => Ok(Box::new(SixPoint)),
        "convex-position" if d == 2 => Ok(Box::new(ConvexPosition)),
        "sixpt" | "convex-position" => Err(Error::Dimension(format!("{text} is planar, got d={d}"))),
        _ => Ok(Box::new(StatementPredicate::parse(text, d)?)),
    }
}

fn cmd_scan(a: &ScanArgs) -> Result<(RunReport, Outcome)> {
    let pred = parse_predicate(&a.predicate, a.d)?;
    let family = match a.family {
        ScanFamily::Moment => SequenceFamily::MomentCurve { d: a.d, seed: a.seed },
        ScanFamily::Convex => SequenceFamily::PerturbedConvex { d: a.d, seed: a.seed },
        ScanFamily::Diagonal => SequenceFamily::StretchedDiagonal { d: a.d },
    };
    let scan = scan_unavoidability(pred.as_ref(), &family, a.max_n, a.budget)?;
    let mut report = RunReport::new(
        "scan",
        json!({
            "predicate": scan.predicate, "family": scan.family,
            "max_n": a.max_n, "budget": a.budget,
        }),
    );
    report.seed = (!family.is_deterministic()).then_some(a.seed);
    report.count("counterexamples", scan.counterexamples.len());
    report.count("found_counterexample", scan.found_counterexample());
    report.list("lengths", &scan.lengths);
    report.list("counterexamples", &scan.counterexamples);
    Ok((report, Outcome::Ok))
}

fn dispatch(command: &Command) -> Result<(RunReport, Outcome)> {
    match command {
        Command::Types(a) => cmd_types(a),
        Command::Appendix => cmd_appendix(),
        Command::Tverberg(a) => cmd_tverberg(a),
        Command::Stair(a) => cmd_stair(a),
        Command::Grid(a) => cmd_grid(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Scan(a) => cmd_scan(a),
    }
}

/// Run the CLI on `args` (including the program name), writing the report to
/// `out` and diagnostics to `err`. Returns the process exit code: 0 on
/// success, 1 when an invariant violation was detected, 2 on usage or input
/// errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    if cli.workers == 0 {
        let _ = writeln!(err, "error: --workers must be positive");
        return 2;
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let start = Instant::now();
    let result = pool.install(|| dispatch(&cli.command));
    match result {
        Ok((mut report, outcome)) => {
            if cli.timing {
                report.timing = Some(Timing {
                    elapsed_ms: start.elapsed().as_millis(),
                    workers: cli.workers,
                });
            }
            let text = if cli.pretty {
                report.to_text()
            } else {
                serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
            };
            if out.write_all(text.as_bytes()).is_err() {
                return 2;
            }
            match outcome {
                Outcome::Ok => 0,
                Outcome::Violation => {
                    let _ = writeln!(err, "invariant violation detected");
                    1
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if matches!(e, Error::Invariant(_)) {
                1
            } else {
                2
            }
        }
    }
}
