//! Batch front door: parse inputs, dispatch to the engine, emit reports.
//!
//! Exit codes are a stable contract: 0 for success or all-pass, 1 for a
//! failed check or invalid certificate, 2 for usage, parse, or precondition
//! errors.

mod certfile;
mod input;

use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use hyperlines::hypergraph::Hypergraph3;
use hyperlines::metrics::{gen_family, Family, Generated};
use hyperlines::proofkit::{
    self, binomial_tail, check_bernstein, check_lg_bound, check_trace_equality, CertMode,
    LineTraces, ProofkitError, SpanInequality,
};
use hyperlines::search::{
    merge_results, min_lines_range, sampled_range, triple_count, Constraint, LineEngine,
    SearchError, SearchResult, Shard, Witness,
};
use hyperlines::VertexId;

use certfile::{format_certificate, looks_like_certificate, parse_certificate};
use input::{parse_input, InputDocument, ParseError};

#[derive(Parser)]
#[command(
    name = "hyperlines",
    version,
    about = "Exact line counting, property suites, and bound certificates for 3-uniform hypergraphs and metric spaces"
)]
struct Cli {
    /// Input document path (defaults to standard input)
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Emit the report as JSON
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized work
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Shard of a partitioned run, as INDEX/COUNT
    #[arg(long, global = true, value_parser = parse_shard_arg)]
    shard: Option<Shard>,
    /// Checkpoint file for resumable search
    #[arg(long, global = true)]
    checkpoint: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the distinct lines of an input structure
    Lines,
    /// Run property suites on an input, or validate a certificate document
    Check {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
    /// Minimum-line search over hypergraph space
    Search {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = ConstraintArg::NoUniversal)]
        constraint: ConstraintArg,
        /// Trial count for sampled mode
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Extract and validate a bound certificate for the input
    Witness {
        /// Positive rational, e.g. 1/4
        #[arg(long)]
        epsilon: String,
        #[arg(long, value_enum, default_value_t = CertModeArg::Exhaustive)]
        mode: CertModeArg,
    },
    /// Generate an instance from a named family
    Gen {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: u32,
        /// Output path (defaults to standard output)
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum SuiteArg {
    Antichain,
    Trace,
    Span,
    LgBound,
    Bernstein,
    All,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

impl ModeArg {
    fn name(self) -> &'static str {
        match self {
            ModeArg::Exhaustive => "exhaustive",
            ModeArg::Sampled => "sampled",
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum ConstraintArg {
    NoUniversal,
    DbeTwoOrThree,
    DbeTwo,
    None,
}

impl ConstraintArg {
    fn to_constraint(self) -> Constraint {
        match self {
            ConstraintArg::NoUniversal => Constraint::NoUniversal,
            ConstraintArg::DbeTwoOrThree => Constraint::DbeTwoOrThree,
            ConstraintArg::DbeTwo => Constraint::DbeTwo,
            ConstraintArg::None => Constraint::Unconstrained,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ConstraintArg::NoUniversal => "no-universal",
            ConstraintArg::DbeTwoOrThree => "dbe-two-or-three",
            ConstraintArg::DbeTwo => "dbe-two",
            ConstraintArg::None => "none",
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum CertModeArg {
    Exhaustive,
    Greedy,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum FamilyArg {
    Bipartite,
    Chordal,
    OneTwoMetric,
    RandomGraph,
    RandomHypergraph,
}

impl FamilyArg {
    fn to_family(self) -> Family {
        match self {
            FamilyArg::Bipartite => Family::Bipartite,
            FamilyArg::Chordal => Family::Chordal,
            FamilyArg::OneTwoMetric => Family::OneTwoMetric,
            FamilyArg::RandomGraph => Family::RandomGraph,
            FamilyArg::RandomHypergraph => Family::RandomHypergraph,
        }
    }
}

fn parse_shard_arg(s: &str) -> Result<Shard, String> {
    let (i, k) = s
        .split_once('/')
        .ok_or_else(|| format!("expected INDEX/COUNT, got `{s}`"))?;
    let shard = Shard {
        index: i.trim().parse().map_err(|_| format!("bad index `{i}`"))?,
        count: k.trim().parse().map_err(|_| format!("bad count `{k}`"))?,
    };
    shard.validate().map_err(|e| e.to_string())?;
    Ok(shard)
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Cert(#[from] certfile::CertParseError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("{0}")]
    Precondition(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
}

impl From<ProofkitError> for CliError {
    fn from(e: ProofkitError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

fn main() -> ExitCode {
    // die quietly when a downstream pager or `head` closes the pipe
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String, CliError> {
    match path {
        Some(p) => Ok(std::fs::read_to_string(p)?),
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            Ok(buf)
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let shard = cli.shard.unwrap_or(Shard::WHOLE);
    match cli.command {
        Command::Lines => {
            let doc = parse_input(&read_input(&cli.input)?)?;
            cmd_lines(&doc, cli.json)
        }
        Command::Check { suite } => {
            let text = read_input(&cli.input)?;
            if looks_like_certificate(&text) {
                return cmd_check_certificate(&text, cli.json);
            }
            let doc = parse_input(&text)?;
            cmd_check(&doc, suite, cli.seed, cli.json)
        }
        Command::Search {
            n,
            mode,
            constraint,
            trials,
        } => cmd_search(
            n,
            mode,
            constraint,
            trials,
            shard,
            cli.seed,
            &cli.checkpoint,
            cli.json,
        ),
        Command::Witness { epsilon, mode } => {
            let doc = parse_input(&read_input(&cli.input)?)?;
            cmd_witness(&doc, &epsilon, mode, cli.json)
        }
        Command::Gen { family, n, output } => cmd_gen(family, n, cli.seed, &output, cli.json),
    }
}

fn cmd_lines(doc: &InputDocument, json: bool) -> Result<u8, CliError> {
    let h = doc.to_hypergraph()?;
    if h.n() < 2 {
        return Err(CliError::Precondition(format!(
            "lines needs n >= 2, got {}",
            h.n()
        )));
    }
    let lines = h.all_lines();
    let universal = lines.iter().any(|l| l.len() == h.n() as usize);
    if json {
        let arr: Vec<Vec<u32>> = lines.iter().map(|l| l.to_vec()).collect();
        println!(
            "{}",
            serde_json::json!({
                "kind": doc.kind(),
                "n": h.n(),
                "m": lines.m(),
                "universal": universal,
                "lines": arr,
            })
        );
    } else {
        println!("kind {}", doc.kind());
        println!("n {}", h.n());
        println!("m {}", lines.m());
        println!("universal {universal}");
        for l in lines.iter() {
            let members: Vec<String> = l.iter().map(|v| v.to_string()).collect();
            println!("line {}", members.join(" "));
        }
    }
    Ok(0)
}

struct SuiteOutcome {
    name: &'static str,
    pass: bool,
    detail: Option<String>,
}

fn suite_antichain(h: &Hypergraph3, seed: u64) -> SuiteOutcome {
    let traces = LineTraces::new(h);
    let named: Vec<(&str, Vec<hyperlines::bits::Bits>)> = vec![
        (
            "alpha",
            (0..h.n())
                .map(|x| traces.alpha_bits(VertexId(x)).clone())
                .collect(),
        ),
        (
            "beta",
            (0..h.n())
                .map(|x| traces.beta_bits(VertexId(x)).clone())
                .collect(),
        ),
    ];
    for (label, f) in named {
        match proofkit::check_sandwich_bits(&traces, &f) {
            Ok(finding) if finding.holds() => {}
            Ok(finding) => {
                return SuiteOutcome {
                    name: "antichain",
                    pass: false,
                    detail: Some(format!("{label}: {finding:?}")),
                }
            }
            Err(e) => {
                return SuiteOutcome {
                    name: "antichain",
                    pass: false,
                    detail: Some(e.to_string()),
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..1000 {
        let f = proofkit::random_sandwich_bits(&traces, &mut rng);
        match proofkit::check_sandwich_bits(&traces, &f) {
            Ok(finding) if finding.holds() => {}
            Ok(finding) => {
                return SuiteOutcome {
                    name: "antichain",
                    pass: false,
                    detail: Some(format!("random sandwich {trial}: {finding:?}")),
                }
            }
            Err(e) => {
                return SuiteOutcome {
                    name: "antichain",
                    pass: false,
                    detail: Some(e.to_string()),
                }
            }
        }
    }
    SuiteOutcome {
        name: "antichain",
        pass: true,
        detail: None,
    }
}

fn suite_trace(h: &Hypergraph3) -> SuiteOutcome {
    let finding = check_trace_equality(h);
    SuiteOutcome {
        name: "trace",
        pass: finding.holds(),
        detail: if finding.holds() {
            None
        } else {
            Some(format!("{finding:?}"))
        },
    }
}

fn suite_span(h: &Hypergraph3, seed: u64) -> SuiteOutcome {
    let traces = LineTraces::new(h);
    let n = h.n();
    let m = traces.m() as u32;
    let check = |verts: &[u32]| -> Option<String> {
        let t = traces
            .span_bits(verts.iter().map(|&v| VertexId(v)))
            .len() as u32;
        let chk = SpanInequality::evaluate(n, m, verts.len() as u32, t);
        if chk.holds {
            None
        } else {
            Some(format!("S = {verts:?}: {} < {}", chk.lhs, chk.rhs))
        }
    };
    if n <= 12 {
        for mask in 1u32..(1 << n) {
            let verts: Vec<u32> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
            if let Some(detail) = check(&verts) {
                return SuiteOutcome {
                    name: "span",
                    pass: false,
                    detail: Some(detail),
                };
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1000 {
            let size = rand::Rng::gen_range(&mut rng, 1..=n);
            let mut verts: Vec<u32> = (0..n).collect();
            rand::seq::SliceRandom::shuffle(&mut verts[..], &mut rng);
            verts.truncate(size as usize);
            verts.sort_unstable();
            if let Some(detail) = check(&verts) {
                return SuiteOutcome {
                    name: "span",
                    pass: false,
                    detail: Some(detail),
                };
            }
        }
    }
    SuiteOutcome {
        name: "span",
        pass: true,
        detail: None,
    }
}

fn suite_lg_bound(h: &Hypergraph3) -> Result<SuiteOutcome, CliError> {
    let pass = check_lg_bound(h)?;
    Ok(SuiteOutcome {
        name: "lg_bound",
        pass,
        detail: if pass {
            None
        } else {
            Some(format!("m = {} below lg {}", h.all_lines().m(), h.n()))
        },
    })
}

fn suite_bernstein() -> SuiteOutcome {
    for n in 2..=60u64 {
        for k in 1..=n / 2 {
            match check_bernstein(n, k) {
                Ok(c) if c.holds => {}
                other => {
                    return SuiteOutcome {
                        name: "bernstein",
                        pass: false,
                        detail: Some(format!("N = {n}, k = {k}: {other:?}")),
                    }
                }
            }
        }
    }
    // epsilon/delta tail form on exact sums
    for (p, q) in [(1u64, 8u64), (1, 4), (1, 2), (1, 1)] {
        let eps = BigRational::new(p.into(), q.into());
        let params = match proofkit::TailBoundParams::for_epsilon(&eps) {
            Ok(p) => p,
            Err(e) => {
                return SuiteOutcome {
                    name: "bernstein",
                    pass: false,
                    detail: Some(e.to_string()),
                }
            }
        };
        let j = params.delta_log2();
        for n in 1u64..=200 {
            let cut = n.div_ceil(1u64 << j) - 1;
            let tail = binomial_tail(n, cut.min(n)).expect("cut <= n");
            let ok = tail.pow(q as u32) <= (num_bigint::BigUint::from(1u32) << (p * n) as usize);
            if !ok {
                return SuiteOutcome {
                    name: "bernstein",
                    pass: false,
                    detail: Some(format!("delta tail fails at eps={p}/{q}, N={n}")),
                };
            }
        }
    }
    SuiteOutcome {
        name: "bernstein",
        pass: true,
        detail: None,
    }
}

fn cmd_check(
    doc: &InputDocument,
    suite: SuiteArg,
    seed: u64,
    json: bool,
) -> Result<u8, CliError> {
    let h = doc.to_hypergraph()?;
    let needs_no_universal = matches!(
        suite,
        SuiteArg::Antichain | SuiteArg::Span | SuiteArg::LgBound | SuiteArg::All
    );
    if needs_no_universal && h.n() >= 2 && h.has_universal_line() {
        return Err(CliError::Precondition(
            "the input has a universal line; the antichain, span, and lg_bound suites require none"
                .to_string(),
        ));
    }
    if h.n() < 2 {
        return Err(CliError::Precondition(format!(
            "check needs n >= 2, got {}",
            h.n()
        )));
    }
    let mut outcomes = Vec::new();
    match suite {
        SuiteArg::Antichain => outcomes.push(suite_antichain(&h, seed)),
        SuiteArg::Trace => outcomes.push(suite_trace(&h)),
        SuiteArg::Span => outcomes.push(suite_span(&h, seed)),
        SuiteArg::LgBound => outcomes.push(suite_lg_bound(&h)?),
        SuiteArg::Bernstein => outcomes.push(suite_bernstein()),
        SuiteArg::All => {
            outcomes.push(suite_antichain(&h, seed));
            outcomes.push(suite_trace(&h));
            outcomes.push(suite_span(&h, seed));
            outcomes.push(suite_lg_bound(&h)?);
            outcomes.push(suite_bernstein());
        }
    }
    let all_pass = outcomes.iter().all(|o| o.pass);
    if json {
        let suites: Vec<serde_json::Value> = outcomes
            .iter()
            .map(|o| {
                serde_json::json!({
                    "name": o.name,
                    "pass": o.pass,
                    "detail": o.detail,
                })
            })
            .collect();
        println!(
            "{}",
            serde_json::json!({"suites": suites, "overall": all_pass})
        );
    } else {
        for o in &outcomes {
            match (&o.pass, &o.detail) {
                (true, _) => println!("suite {} PASS", o.name),
                (false, Some(d)) => println!("suite {} FAIL: {d}", o.name),
                (false, None) => println!("suite {} FAIL", o.name),
            }
        }
        println!("overall {}", if all_pass { "PASS" } else { "FAIL" });
    }
    Ok(if all_pass { 0 } else { 1 })
}

fn cmd_check_certificate(text: &str, json: bool) -> Result<u8, CliError> {
    let (cert, h) = parse_certificate(text)?;
    let result = cert.validate(&h);
    let pass = result.is_ok();
    let detail = result.err().map(|e| e.to_string());
    if json {
        println!(
            "{}",
            serde_json::json!({
                "suites": [{"name": "certificate", "pass": pass, "detail": detail}],
                "overall": pass,
            })
        );
    } else {
        match &detail {
            None => println!("suite certificate PASS"),
            Some(d) => println!("suite certificate FAIL: {d}"),
        }
        println!("overall {}", if pass { "PASS" } else { "FAIL" });
    }
    Ok(if pass { 0 } else { 1 })
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
struct CheckpointTask {
    n: u32,
    mode: String,
    constraint: String,
    seed: u64,
    shard_index: u64,
    shard_count: u64,
    total: u64,
}

#[derive(Serialize, Deserialize)]
struct CheckpointWitness {
    index: u64,
    n: u32,
    hedges: Vec<[u32; 3]>,
}

#[derive(Serialize, Deserialize)]
struct CheckpointFile {
    task: CheckpointTask,
    cursor: u64,
    examined: u64,
    min_m: Option<u32>,
    witness: Option<CheckpointWitness>,
    histogram: BTreeMap<u32, u64>,
}

fn result_to_checkpoint(task: CheckpointTask, cursor: u64, r: &SearchResult) -> CheckpointFile {
    CheckpointFile {
        task,
        cursor,
        examined: r.examined,
        min_m: r.min_m,
        witness: r.argmin.as_ref().map(|w| CheckpointWitness {
            index: w.index,
            n: w.hypergraph.n(),
            hedges: w.hypergraph.hedges().to_vec(),
        }),
        histogram: r.histogram.clone(),
    }
}

fn checkpoint_to_result(file: &CheckpointFile) -> Result<SearchResult, CliError> {
    let argmin = match &file.witness {
        None => None,
        Some(w) => Some(Witness {
            hypergraph: Hypergraph3::new(w.n, w.hedges.iter().copied())
                .map_err(|e| CliError::Checkpoint(e.to_string()))?,
            index: w.index,
        }),
    };
    Ok(SearchResult {
        n: file.task.n,
        examined: file.examined,
        min_m: file.min_m,
        argmin,
        histogram: file.histogram.clone(),
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    n: u32,
    mode: ModeArg,
    constraint_arg: ConstraintArg,
    trials: u64,
    shard: Shard,
    seed: u64,
    checkpoint: &Option<PathBuf>,
    json: bool,
) -> Result<u8, CliError> {
    let constraint = constraint_arg.to_constraint();
    let total = match mode {
        ModeArg::Exhaustive => {
            if !(2..=7).contains(&n) {
                return Err(SearchError::UnsupportedSize { n }.into());
            }
            1u64 << triple_count(n)
        }
        ModeArg::Sampled => {
            if trials == 0 {
                return Err(SearchError::NoTrials.into());
            }
            trials
        }
    };
    shard.validate()?;
    let range = shard.range(total);
    let task = CheckpointTask {
        n,
        mode: mode.name().to_string(),
        constraint: constraint_arg.name().to_string(),
        seed,
        shard_index: shard.index,
        shard_count: shard.count,
        total,
    };

    let mut acc = SearchResult {
        n,
        examined: 0,
        min_m: None,
        argmin: None,
        histogram: BTreeMap::new(),
    };
    let mut cursor = range.start;
    if let Some(path) = checkpoint {
        if path.exists() {
            let file: CheckpointFile = serde_json::from_str(&std::fs::read_to_string(path)?)
                .map_err(|e| CliError::Checkpoint(format!("unreadable file: {e}")))?;
            if file.task != task {
                return Err(CliError::Checkpoint(
                    "existing checkpoint belongs to a different search".to_string(),
                ));
            }
            if file.cursor < range.start || file.cursor > range.end {
                return Err(CliError::Checkpoint("cursor out of range".to_string()));
            }
            acc = checkpoint_to_result(&file)?;
            cursor = file.cursor;
        }
    }

    const CHUNK: u64 = 1 << 13;
    while cursor < range.end {
        let hi = (cursor + CHUNK).min(range.end);
        let part = match mode {
            ModeArg::Exhaustive => {
                min_lines_range(n, constraint, cursor..hi, LineEngine::Optimized)?
            }
            ModeArg::Sampled => sampled_range(n, constraint, seed, cursor..hi)?,
        };
        acc = merge_results(acc, part)?;
        cursor = hi;
        if let Some(path) = checkpoint {
            save_checkpoint(path, &result_to_checkpoint(task_clone(&task), cursor, &acc))?;
        }
    }

    print_search_report(&acc, mode, constraint_arg, trials, shard, seed, json);
    Ok(0)
}

fn task_clone(t: &CheckpointTask) -> CheckpointTask {
    CheckpointTask {
        n: t.n,
        mode: t.mode.clone(),
        constraint: t.constraint.clone(),
        seed: t.seed,
        shard_index: t.shard_index,
        shard_count: t.shard_count,
        total: t.total,
    }
}

fn save_checkpoint(path: &Path, file: &CheckpointFile) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, serde_json::to_string_pretty(file).expect("serializable"))?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn print_search_report(
    r: &SearchResult,
    mode: ModeArg,
    constraint: ConstraintArg,
    trials: u64,
    shard: Shard,
    seed: u64,
    json: bool,
) {
    if json {
        let witness = r.argmin.as_ref().map(|w| {
            serde_json::json!({
                "index": w.index,
                "n": w.hypergraph.n(),
                "hedges": w.hypergraph.hedges(),
            })
        });
        let mut obj = serde_json::json!({
            "n": r.n,
            "mode": mode.name(),
            "constraint": constraint.name(),
            "shard": format!("{}/{}", shard.index, shard.count),
            "examined": r.examined,
            "min_m": r.min_m,
            "histogram": r.histogram,
            "witness": witness,
        });
        if mode == ModeArg::Sampled {
            obj["seed"] = serde_json::json!(seed);
            obj["trials"] = serde_json::json!(trials);
        }
        println!("{obj}");
    } else {
        println!("n {}", r.n);
        println!("mode {}", mode.name());
        println!("constraint {}", constraint.name());
        println!("shard {}/{}", shard.index, shard.count);
        if mode == ModeArg::Sampled {
            println!("seed {seed}");
            println!("trials {trials}");
        }
        println!("examined {}", r.examined);
        match r.min_m {
            Some(m) => println!("min_m {m}"),
            None => println!("min_m none"),
        }
        for (m, count) in &r.histogram {
            println!("histogram {m} {count}");
        }
        if let Some(w) = &r.argmin {
            println!("witness index {}", w.index);
            print!("{}", input::format_hypergraph(&w.hypergraph));
        }
    }
}

fn cmd_witness(
    doc: &InputDocument,
    epsilon: &str,
    mode: CertModeArg,
    json: bool,
) -> Result<u8, CliError> {
    let eps: BigRational = epsilon
        .parse()
        .map_err(|_| CliError::Precondition(format!("invalid epsilon `{epsilon}`")))?;
    if !eps.is_positive() {
        return Err(CliError::Precondition(
            "invalid epsilon: must be positive".to_string(),
        ));
    }
    let h = doc.to_hypergraph()?;
    let cert_mode = match mode {
        CertModeArg::Exhaustive => CertMode::Exhaustive,
        CertModeArg::Greedy => CertMode::Greedy,
    };
    let cert = proofkit::extract_certificate(&h, &eps, cert_mode)?;
    let validation = cert.validate(&h);
    let valid = validation.is_ok();
    if json {
        let ineqs: Vec<serde_json::Value> = cert
            .inequalities
            .iter()
            .map(|r| {
                serde_json::json!({
                    "name": r.name,
                    "lhs": r.lhs.to_string(),
                    "rel": r.rel.symbol(),
                    "rhs": r.rhs.to_string(),
                    "holds": r.holds,
                })
            })
            .collect();
        println!(
            "{}",
            serde_json::json!({
                "n": cert.n,
                "m": cert.m,
                "epsilon": cert.epsilon.to_string(),
                "delta": cert.delta.to_string(),
                "branch": cert.branch.name(),
                "heuristic": cert.heuristic,
                "side_condition": cert.side_condition,
                "s": cert.s,
                "t": cert.t,
                "S": cert.s_set.iter().map(|v| v.0).collect::<Vec<_>>(),
                "R": cert.r_set.iter().map(|v| v.0).collect::<Vec<_>>(),
                "span": cert.span_lines.iter().map(|l| l.to_vec()).collect::<Vec<_>>(),
                "inequalities": ineqs,
                "hedges": h.hedges(),
                "valid": valid,
            })
        );
    } else {
        print!("{}", format_certificate(&cert, &h));
    }
    match validation {
        Ok(()) => Ok(0),
        Err(e) => {
            eprintln!("certificate failed validation: {e}");
            Ok(1)
        }
    }
}

fn cmd_gen(
    family: FamilyArg,
    n: u32,
    seed: u64,
    output: &Option<PathBuf>,
    _json: bool,
) -> Result<u8, CliError> {
    let generated = gen_family(family.to_family(), n, seed)
        .map_err(|e| CliError::Precondition(e.to_string()))?;
    let text = match &generated {
        Generated::Graph(g) => input::format_graph(g),
        Generated::Metric(ms) => input::format_metric(ms),
        Generated::Hypergraph(h) => input::format_hypergraph(h),
    };
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(0)
}
