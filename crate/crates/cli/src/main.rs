//! `fusion`: command-line front end for the fusion map.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use fusion_core::conjugacy::{canonicalize, is_conjugate, levi_type, orbit_is_conjugate};
use fusion_core::diagram::{all_labelings, LabeledDiagramJson};
use fusion_core::oracle::{classical_partition, regular_partition};
use fusion_core::partition::{build_digraph, labeled_partition, partition_fuse, peel_partition_all};
use fusion_core::weight::weight_fuse_all;
use fusion_core::{DynkinDiagram, Family, Fuser, FusionError, FusionOutcome, LabeledDiagram, Method, VertexSet};

/// Largest rank accepted by `enumerate` and `verify` with unlabeled vertices.
const SPARSE_RANK_LIMIT: u32 = 12;
/// Largest rank accepted by `enumerate` and `verify` on full labelings.
const FULL_RANK_LIMIT: u32 = 20;

#[derive(Parser)]
#[command(name = "fusion", version, about = "Fusion of labeled Dynkin diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fuse one labeled diagram.
    Fuse(FuseArgs),
    /// Path digraph and peeled Jordan partition of a type A or D labeling.
    Partition(PartitionArgs),
    /// Decide whether two subsets are W-conjugate.
    Conjugate(ConjugateArgs),
    /// Fusion table over every label assignment, one JSON record per line.
    Enumerate(EnumerateArgs),
    /// Cross-check methods over every label assignment.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct InputArgs {
    #[arg(long, required_unless_present = "input")]
    family: Option<Family>,
    #[arg(long, required_unless_present = "input")]
    rank: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    plus: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    minus: Vec<u32>,
    /// JSON file with family, rank, plus and minus.
    #[arg(long, conflicts_with_all = ["family", "rank", "plus", "minus"])]
    input: Option<PathBuf>,
}

impl InputArgs {
    fn labeled(&self) -> Result<LabeledDiagram, CliError> {
        if let Some(path) = &self.input {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            return Ok(LabeledDiagram::parse_json(&text)?);
        }
        let (family, rank) = (self.family.expect("required by clap"), self.rank.expect("required by clap"));
        Ok(LabeledDiagram::from_lists(family, rank, &self.plus, &self.minus)?)
    }
}

#[derive(Args)]
struct FuseArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value = "auto")]
    method: Method,
}

#[derive(Args)]
struct PartitionArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Also list the partitions reached by every peeling choice.
    #[arg(long)]
    all: bool,
}

#[derive(Args)]
struct ConjugateArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    rank: u32,
    #[arg(long, value_delimiter = ',')]
    a: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    b: Vec<u32>,
    /// Confirm with the root-orbit oracle (small ranks only).
    #[arg(long)]
    orbit: bool,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    rank: u32,
    #[arg(long, default_value = "auto")]
    method: Method,
    /// Only assignments that label every vertex.
    #[arg(long)]
    full: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    rank: u32,
    /// Methods to compare; defaults to every method supporting the family.
    #[arg(long, value_delimiter = ',')]
    methods: Vec<Method>,
    /// Include assignments with unlabeled vertices.
    #[arg(long)]
    sparse: bool,
    /// Branch over every tie and peeling choice.
    #[arg(long)]
    exhaustive_ties: bool,
}

enum CliError {
    Usage(String),
    Fusion(FusionError),
    Io(String),
    Mismatch,
}

impl CliError {
    fn io(path: &std::path::Path, e: io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

impl From<FusionError> for CliError {
    fn from(e: FusionError) -> Self {
        CliError::Fusion(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("usage", &e.to_string(), 1),
    };
    let fuser = Fuser::new(std::env::var_os("FUSION_CACHE_DIR").map(PathBuf::from));
    let result = match cli.command {
        Command::Fuse(a) => fuse_command(&fuser, a),
        Command::Partition(a) => partition_command(a),
        Command::Conjugate(a) => conjugate_command(a),
        Command::Enumerate(a) => enumerate_command(&fuser, a),
        Command::Verify(a) => verify_command(&fuser, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Mismatch) => ExitCode::from(2),
        Err(CliError::Usage(m)) => fail("usage", &m, 1),
        Err(CliError::Io(m)) => fail("io", &m, 1),
        Err(CliError::Fusion(e)) => {
            let code = match e {
                FusionError::Consistency(_) | FusionError::Falsified(_) | FusionError::DetectionGap(_) => 2,
                _ => 1,
            };
            fail(e.kind(), &e.to_string(), code)
        }
    }
}

fn fail(kind: &str, message: &str, code: u8) -> ExitCode {
    let body = json!({ "error": { "kind": kind, "message": message.trim_end() } });
    eprintln!("{body}");
    ExitCode::from(code)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string(value).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(io::stdout().lock(), "{text}").map_err(|e| CliError::Io(e.to_string()))
}

fn check_guard(family: Family, rank: u32, sparse: bool) -> Result<DynkinDiagram, CliError> {
    let d = DynkinDiagram::new(family, rank)?;
    let limit = if sparse { SPARSE_RANK_LIMIT } else { FULL_RANK_LIMIT };
    if rank > limit {
        return Err(FusionError::CapabilityExceeded { op: "enumeration", rank, limit }.into());
    }
    Ok(d)
}

#[derive(Serialize)]
struct FuseReport {
    input: LabeledDiagramJson,
    #[serde(flatten)]
    outcome: FusionOutcome,
}

fn fuse_command(fuser: &Fuser, args: FuseArgs) -> Result<(), CliError> {
    let ld = args.input.labeled()?;
    let outcome = fuser.fuse(&ld, args.method)?;
    print_json(&FuseReport { input: LabeledDiagramJson::from(&ld), outcome })
}

fn partition_command(args: PartitionArgs) -> Result<(), CliError> {
    let ld = args.input.labeled()?;
    let g = build_digraph(&ld)?;
    let p = labeled_partition(&ld)?;
    let mut out = json!({
        "input": LabeledDiagramJson::from(&ld),
        "vertex_count": g.vertex_count,
        "arcs": g.arcs,
        "partition": p,
        "j": partition_fuse(&ld)?,
    });
    if args.all {
        out["choices"] = json!(peel_partition_all(&g)?);
    }
    print_json(&out)
}

fn conjugate_command(args: ConjugateArgs) -> Result<(), CliError> {
    let d = DynkinDiagram::new(args.family, args.rank)?;
    let set = |v: &[u32]| -> Result<VertexSet, CliError> {
        if let Some(&bad) = v.iter().find(|&&x| x == 0 || x > args.rank) {
            return Err(FusionError::VertexOutOfRange { vertex: bad, rank: args.rank }.into());
        }
        Ok(v.iter().copied().collect())
    };
    let (a, b) = (set(&args.a)?, set(&args.b)?);
    let mut out = json!({
        "family": args.family,
        "rank": args.rank,
        "a": a,
        "b": b,
        "conjugate": is_conjugate(&d, a, b),
        "canonical_a": canonicalize(&d, a),
        "canonical_b": canonicalize(&d, b),
        "levi_type_a": levi_type(&d, a),
        "levi_type_b": levi_type(&d, b),
    });
    if args.orbit {
        out["orbit_conjugate"] = json!(orbit_is_conjugate(&d, a, b)?);
    }
    print_json(&out)
}

#[derive(Serialize)]
struct TableRecord {
    plus: VertexSet,
    minus: VertexSet,
    j: VertexSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    canonical_j: Option<VertexSet>,
    levi_type: String,
}

fn enumerate_command(fuser: &Fuser, args: EnumerateArgs) -> Result<(), CliError> {
    let d = check_guard(args.family, args.rank, !args.full)?;
    if !args.method.supports(args.family) {
        return Err(FusionError::UnsupportedFamily { family: args.family, op: args.method.name() }.into());
    }
    let records = all_labelings(&d, !args.full)
        .par_iter()
        .map(|ld| {
            let out = fuser.fuse(ld, args.method)?;
            Ok(TableRecord {
                plus: ld.plus(),
                minus: ld.minus(),
                j: out.j,
                canonical_j: out.canonical_j,
                levi_type: out.levi_type,
            })
        })
        .collect::<Result<Vec<_>, FusionError>>()?;
    let mut stdout = io::stdout().lock();
    for r in &records {
        let line = serde_json::to_string(r).map_err(|e| CliError::Io(e.to_string()))?;
        writeln!(stdout, "{line}").map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct Verdict {
    a: Method,
    b: Method,
    conjugate: bool,
}

#[derive(Serialize)]
struct Mismatch {
    input: LabeledDiagramJson,
    outputs: BTreeMap<Method, Value>,
    verdicts: Vec<Verdict>,
    problems: Vec<String>,
}

#[derive(Default, Serialize)]
struct MethodStats {
    ok: usize,
    errors: usize,
}

#[derive(Serialize)]
struct VerifyReport {
    family: Family,
    rank: u32,
    sparse: bool,
    exhaustive_ties: bool,
    inputs_checked: usize,
    methods: Vec<Method>,
    per_method: BTreeMap<Method, MethodStats>,
    mismatches: Vec<Mismatch>,
    elapsed_ms: u128,
}

struct Checked {
    ok: Vec<bool>,
    mismatch: Option<Mismatch>,
}

fn verify_command(fuser: &Fuser, args: VerifyArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let d = check_guard(args.family, args.rank, args.sparse)?;
    let methods: Vec<Method> = if args.methods.is_empty() {
        Method::ALL.into_iter().filter(|m| *m != Method::Auto && m.supports(args.family)).collect()
    } else {
        args.methods.clone()
    };
    if let Some(m) = methods.iter().find(|m| !m.supports(args.family)) {
        return Err(CliError::Usage(format!("method {m} does not support family {}", args.family)));
    }
    let inputs = all_labelings(&d, args.sparse);
    let mut checked: Vec<(usize, Checked)> = inputs
        .par_iter()
        .enumerate()
        .map(|(i, ld)| (i, check_input(fuser, ld, &methods, args.exhaustive_ties)))
        .collect();
    checked.sort_by_key(|(i, _)| *i);
    let mut per_method: BTreeMap<Method, MethodStats> = methods.iter().map(|m| (*m, MethodStats::default())).collect();
    let mut mismatches = Vec::new();
    for (_, c) in checked {
        for (m, ok) in methods.iter().zip(&c.ok) {
            let s = per_method.get_mut(m).expect("every method has stats");
            if *ok {
                s.ok += 1;
            } else {
                s.errors += 1;
            }
        }
        mismatches.extend(c.mismatch);
    }
    let report = VerifyReport {
        family: args.family,
        rank: args.rank,
        sparse: args.sparse,
        exhaustive_ties: args.exhaustive_ties,
        inputs_checked: inputs.len(),
        methods,
        per_method,
        mismatches,
        elapsed_ms: start.elapsed().as_millis(),
    };
    print_json(&report)?;
    if report.mismatches.is_empty() {
        Ok(())
    } else {
        Err(CliError::Mismatch)
    }
}

fn check_input(fuser: &Fuser, ld: &LabeledDiagram, methods: &[Method], exhaustive: bool) -> Checked {
    let d = ld.diagram();
    let outcomes: Vec<Result<FusionOutcome, FusionError>> = methods.iter().map(|m| fuser.fuse(ld, *m)).collect();
    let mut problems = Vec::new();
    let mut verdicts = Vec::new();
    for (i, a) in outcomes.iter().enumerate() {
        let Ok(a) = a else { continue };
        for b in outcomes[i + 1..].iter().flatten() {
            let conjugate = a.admits(d, b.j) || b.admits(d, a.j);
            if !conjugate {
                problems.push(format!("{} gives {} but {} gives {}", a.method, a.j, b.method, b.j));
            }
            verdicts.push(Verdict { a: a.method, b: b.method, conjugate });
        }
    }
    for (m, out) in methods.iter().zip(&outcomes) {
        if let Err(e) = out {
            problems.push(format!("{m}: {e}"));
        }
    }
    if matches!(ld.family(), Family::A | Family::D) {
        if let Err(e) = check_partitions(ld, methods, &outcomes, &mut problems) {
            problems.push(format!("partition check: {e}"));
        }
    }
    if exhaustive {
        if let Err(e) = check_ties(ld, methods, &mut problems) {
            problems.push(format!("tie check: {e}"));
        }
    }
    let ok = outcomes.iter().map(Result::is_ok).collect();
    if problems.is_empty() {
        return Checked { ok, mismatch: None };
    }
    let outputs = methods
        .iter()
        .zip(&outcomes)
        .map(|(m, o)| {
            let v = match o {
                Ok(o) => json!({ "j": o.j, "alternatives": o.alternatives }),
                Err(e) => json!({ "error": { "kind": e.kind(), "message": e.to_string() } }),
            };
            (*m, v)
        })
        .collect();
    Checked { ok, mismatch: Some(Mismatch { input: LabeledDiagramJson::from(ld), outputs, verdicts, problems }) }
}

/// Peeled partition against the matrix oracle, and the regular partition of
/// every output against both.
fn check_partitions(
    ld: &LabeledDiagram,
    methods: &[Method],
    outcomes: &[Result<FusionOutcome, FusionError>],
    problems: &mut Vec<String>,
) -> Result<(), FusionError> {
    let oracle = classical_partition(ld)?;
    let peeled = labeled_partition(ld)?;
    if peeled != oracle {
        problems.push(format!("peeling gives {peeled} but the matrix has Jordan type {oracle}"));
    }
    for (m, out) in methods.iter().zip(outcomes) {
        if let Ok(out) = out {
            let p = regular_partition(ld.family(), ld.rank(), out.j)?;
            if p != oracle {
                problems.push(format!("{m} output {} has partition {p}, expected {oracle}", out.j));
            }
        }
    }
    Ok(())
}

fn check_ties(ld: &LabeledDiagram, methods: &[Method], problems: &mut Vec<String>) -> Result<(), FusionError> {
    let d = ld.diagram();
    if methods.contains(&Method::Weight) && d.is_simply_laced() {
        let all = weight_fuse_all(ld)?;
        let first = *all.iter().next().expect("at least one outcome");
        for j in &all {
            if !is_conjugate(d, first, *j) {
                problems.push(format!("weight tie choices give {first} and {j}"));
            }
        }
    }
    if methods.contains(&Method::Partition) && matches!(ld.family(), Family::A | Family::D) {
        let all = peel_partition_all(&build_digraph(ld)?)?;
        if all.len() > 1 {
            let list: Vec<String> = all.iter().map(ToString::to_string).collect();
            problems.push(format!("peeling choices give {}", list.join(" ")));
        }
    }
    Ok(())
}
