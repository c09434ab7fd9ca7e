//! Command-line driver. Structured output goes to stdout, human summaries to
//! stderr.
//!
//! Exit codes: 0 success or feasible, 2 a 4-cycle, 3 a degree violation,
//! 4 a diagnostic, 1 crosscheck discrepancies, 64 usage or input errors.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::constructions::{er_polarity, named_graph, random_c4_free, SplitMix64};
use crate::degeneracy::DemandFn;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::io::{
    encode_edge_list, encode_graph6, parse_edge_list, parse_graph6, parse_graph_auto, DemandDoc,
    SolveReport, Timing,
};
use crate::oracle::{
    crosscheck, crosscheck_random, exists_feasible, search_tight_functions, verify_tightness,
    CrosscheckReport, TightnessInstance, EXISTS_MAX,
};
use crate::solver::{
    disjoint_cycles, k_way, solve_detailed, verify_feasible, Certificate, DemandPair, Packing,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISCREPANCY: i32 = 1;
pub const EXIT_C4: i32 = 2;
pub const EXIT_DEGREE: i32 = 3;
pub const EXIT_DIAGNOSTIC: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "c4part",
    version,
    about = "Degree-constrained bipartitions of C4-free graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one instance and print a report
    Solve(SolveArgs),
    /// Look for a 4-cycle
    CheckC4(GraphArgs),
    /// Generate a graph
    Gen(GenArgs),
    /// Split into parts with the given minimum degrees
    Kway(KwayArgs),
    /// Find vertex-disjoint cycles
    Cycles(CyclesArgs),
    /// Exhaustive feasibility search (n <= 24)
    Oracle(DemandArgs),
    /// Check or search for instances with d = a + b - 2 and no partition
    Tightness(TightnessArgs),
    /// Compare solver and oracle over enumerated or random graphs
    Crosscheck(CrosscheckArgs),
    /// Time the solver on polarity graphs
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum InFormat {
    Auto,
    Graph6,
    Edges,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutFormat {
    Graph6,
    Edges,
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Graph file; stdin when omitted or "-"
    #[arg(long, short)]
    graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = InFormat::Auto)]
    format: InFormat,
}

#[derive(Args, Debug)]
struct DemandArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Demand document with a_const/b_const or a/b arrays
    #[arg(long)]
    demands: Option<PathBuf>,
    /// Document whose a or a_const field sets the A demands
    #[arg(long)]
    a_file: Option<PathBuf>,
    /// Document whose b or b_const field sets the B demands
    #[arg(long)]
    b_file: Option<PathBuf>,
    #[arg(long)]
    a_const: Option<u32>,
    #[arg(long)]
    b_const: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Fallback {
    None,
    Oracle,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    demands: DemandArgs,
    /// On a diagnostic, retry with the exhaustive search when n <= 24
    #[arg(long, value_enum, default_value_t = Fallback::None)]
    fallback: Fallback,
    /// Leave out the timing section
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
    #[arg(long, value_enum, default_value_t = OutFormat::Graph6, global = true)]
    format: OutFormat,
}

#[derive(Subcommand, Debug)]
enum GenKind {
    /// Polarity graph ER_q for a prime q
    Polarity {
        #[arg(long)]
        q: u64,
    },
    /// Named fixture: petersen, heawood, triangle, cycle(k), path(k), ...
    Named { name: String },
    /// Random C4-free graph
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct KwayArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Part demands, e.g. 3,3,3
    #[arg(long, value_delimiter = ',', required = true)]
    s: Vec<u32>,
}

#[derive(Args, Debug)]
struct CyclesArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, short)]
    k: usize,
}

#[derive(Args, Debug)]
struct TightnessArgs {
    #[command(flatten)]
    demands: DemandArgs,
    /// Enumerate every tight demand split instead of checking one
    #[arg(long)]
    search: bool,
}

#[derive(Args, Debug)]
struct CrosscheckArgs {
    #[arg(long, default_value_t = 5)]
    n_max: usize,
    /// Constant demand pairs as AxB, e.g. 2x2,2x3
    #[arg(long, value_delimiter = ',', default_value = "2x2")]
    grid: Vec<String>,
    /// Permit n_max = 8
    #[arg(long)]
    allow_eight: bool,
    /// Also check this many random graphs
    #[arg(long, default_value_t = 0)]
    random: u64,
    #[arg(long, default_value_t = 10)]
    random_n_lo: usize,
    #[arg(long, default_value_t = 24)]
    random_n_hi: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    q: Vec<u64>,
    /// Constant A demand; default ceil(q/2)
    #[arg(long)]
    a: Option<u32>,
    /// Constant B demand; default ceil(q/2)
    #[arg(long)]
    b: Option<u32>,
    /// Relabel vertices with a seeded shuffle before solving
    #[arg(long)]
    seed: Option<u64>,
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run_cli<I, T>(argv: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let mut io = Io { stdin, out, err };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io.err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: Command, io: &mut Io) -> Result<i32> {
    match cmd {
        Command::Solve(a) => cmd_solve(a, io),
        Command::CheckC4(a) => cmd_check_c4(a, io),
        Command::Gen(a) => cmd_gen(a, io),
        Command::Kway(a) => cmd_kway(a, io),
        Command::Cycles(a) => cmd_cycles(a, io),
        Command::Oracle(a) => cmd_oracle(a, io),
        Command::Tightness(a) => cmd_tightness(a, io),
        Command::Crosscheck(a) => cmd_crosscheck(a, io),
        Command::Bench(a) => cmd_bench(a, io),
    }
}

fn read_text(path: &Option<PathBuf>, io: &mut Io) -> Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", p.display()))),
        _ => {
            let mut s = String::new();
            io.stdin
                .read_to_string(&mut s)
                .map_err(|e| Error::Precondition(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn read_graph(args: &GraphArgs, io: &mut Io) -> Result<Graph> {
    let text = read_text(&args.graph, io)?;
    match args.format {
        InFormat::Auto => parse_graph_auto(&text),
        InFormat::Graph6 => parse_graph6(text.lines().next().unwrap_or("")),
        InFormat::Edges => parse_edge_list(&text),
    }
}

fn read_doc(path: &PathBuf) -> Result<DemandDoc> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Demands(format!("cannot read {}: {e}", path.display())))?;
    DemandDoc::parse(&text)
}

/// Later sources win: --demands, then --a-file/--b-file, then the constants.
fn read_demands(args: &DemandArgs, n: usize) -> Result<(DemandFn, DemandFn)> {
    let mut doc = DemandDoc::default();
    if let Some(p) = &args.demands {
        doc = doc.overlay(read_doc(p)?);
    }
    if let Some(p) = &args.a_file {
        let d = read_doc(p)?;
        doc = doc.overlay(DemandDoc {
            a_const: d.a_const,
            a: d.a,
            ..Default::default()
        });
    }
    if let Some(p) = &args.b_file {
        let d = read_doc(p)?;
        doc = doc.overlay(DemandDoc {
            b_const: d.b_const,
            b: d.b,
            ..Default::default()
        });
    }
    doc = doc.overlay(DemandDoc {
        a_const: args.a_const,
        b_const: args.b_const,
        ..Default::default()
    });
    doc.resolve(n)
}

fn emit(io: &mut Io, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("output serializes");
    writeln!(io.out, "{text}").map_err(|e| Error::Precondition(format!("cannot write output: {e}")))
}

fn note(io: &mut Io, text: &str) {
    let _ = writeln!(io.err, "{text}");
}

fn exit_for(cert: &Certificate) -> i32 {
    match cert {
        Certificate::FeasiblePartition(_) => EXIT_OK,
        Certificate::C4Witness(_) => EXIT_C4,
        Certificate::DegreeViolation { .. } => EXIT_DEGREE,
        Certificate::Diagnostic(_) => EXIT_DIAGNOSTIC,
    }
}

fn cmd_solve(args: SolveArgs, io: &mut Io) -> Result<i32> {
    let g = read_graph(&args.demands.graph, io)?;
    let (a, b) = read_demands(&args.demands, g.n())?;
    let start = Instant::now();
    let solved = solve_detailed(&g, &DemandPair::new(a.clone(), b.clone()))?;
    let mut cert = solved.certificate;
    let mut fallback = false;
    if matches!(cert, Certificate::Diagnostic(_))
        && args.fallback == Fallback::Oracle
        && g.n() <= EXISTS_MAX
    {
        if let Some(bp) = exists_feasible(&g, &a, &b)? {
            cert = Certificate::FeasiblePartition(bp);
            fallback = true;
        }
    }
    let elapsed = start.elapsed();
    let mut report = SolveReport::new(&g, &a, &b, &cert, &solved.stats);
    report.oracle_fallback = fallback;
    if !args.no_timing {
        report.timing = Some(Timing {
            wall_time_ms: elapsed.as_millis() as u64,
        });
    }
    emit(io, &report)?;
    let summary = match &cert {
        Certificate::FeasiblePartition(bp) => {
            let ok = verify_feasible(&g, &a, &b, bp)?;
            format!(
                "feasible: |A| = {}, |B| = {}, verified = {ok}",
                bp.a.len(),
                bp.b.len()
            )
        }
        Certificate::C4Witness(c) => format!("4-cycle {:?}", c.vertices()),
        Certificate::DegreeViolation {
            vertex,
            degree,
            required,
        } => format!("vertex {vertex} has degree {degree}, needs {required}"),
        Certificate::Diagnostic(t) => format!("diagnostic: {}", t.reason),
    };
    note(io, &format!("{summary} ({} ms)", elapsed.as_millis()));
    Ok(exit_for(&cert))
}

#[derive(Serialize)]
struct C4Report {
    c4_free: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<[usize; 4]>,
}

fn cmd_check_c4(args: GraphArgs, io: &mut Io) -> Result<i32> {
    let g = read_graph(&args, io)?;
    let witness = g.find_four_cycle().map(|c| c.vertices());
    emit(
        io,
        &C4Report {
            c4_free: witness.is_none(),
            witness,
        },
    )?;
    match witness {
        Some(c) => {
            note(io, &format!("4-cycle {c:?}"));
            Ok(EXIT_C4)
        }
        None => {
            note(io, "C4-free");
            Ok(EXIT_OK)
        }
    }
}

fn cmd_gen(args: GenArgs, io: &mut Io) -> Result<i32> {
    let g = match args.kind {
        GenKind::Polarity { q } => er_polarity(q)?.graph,
        GenKind::Named { name } => named_graph(&name)?,
        GenKind::Random { n, m, seed } => {
            let r = random_c4_free(n, m, seed);
            if r.saturated {
                note(io, &format!("saturated at {} edges", r.graph.m()));
            }
            r.graph
        }
    };
    let text = match args.format {
        OutFormat::Graph6 => encode_graph6(&g) + "\n",
        OutFormat::Edges => encode_edge_list(&g),
    };
    io.out
        .write_all(text.as_bytes())
        .map_err(|e| Error::Precondition(format!("cannot write output: {e}")))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct PackingReport {
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    parts: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    blocked: Option<BlockedBy>,
}

#[derive(Serialize)]
struct BlockedBy {
    status: &'static str,
    detail: String,
}

fn packing_out(p: Packing<Vec<Vec<usize>>>, io: &mut Io) -> Result<i32> {
    let (report, code) = match p {
        Packing::Found(parts) => (
            PackingReport {
                status: "found",
                parts: Some(parts),
                blocked: None,
            },
            EXIT_OK,
        ),
        Packing::Blocked(cert) => {
            let detail = match &cert {
                Certificate::C4Witness(c) => format!("{:?}", c.vertices()),
                Certificate::DegreeViolation {
                    vertex,
                    degree,
                    required,
                } => format!("vertex {vertex} degree {degree} < {required}"),
                Certificate::Diagnostic(t) => t.reason.clone(),
                Certificate::FeasiblePartition(_) => String::new(),
            };
            (
                PackingReport {
                    status: "blocked",
                    parts: None,
                    blocked: Some(BlockedBy {
                        status: cert.status(),
                        detail,
                    }),
                },
                exit_for(&cert),
            )
        }
    };
    emit(io, &report)?;
    Ok(code)
}

fn cmd_kway(args: KwayArgs, io: &mut Io) -> Result<i32> {
    let g = read_graph(&args.graph, io)?;
    let p = k_way(&g, &args.s)?;
    packing_out(p, io)
}

fn cmd_cycles(args: CyclesArgs, io: &mut Io) -> Result<i32> {
    let g = read_graph(&args.graph, io)?;
    let p = disjoint_cycles(&g, args.k)?;
    packing_out(p, io)
}

#[derive(Serialize)]
struct OracleReport {
    feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    partition: Option<crate::solver::Bipartition>,
}

fn cmd_oracle(args: DemandArgs, io: &mut Io) -> Result<i32> {
    let g = read_graph(&args.graph, io)?;
    let (a, b) = read_demands(&args, g.n())?;
    let found = exists_feasible(&g, &a, &b)?;
    note(
        io,
        if found.is_some() {
            "feasible partition exists"
        } else {
            "no feasible partition"
        },
    );
    emit(
        io,
        &OracleReport {
            feasible: found.is_some(),
            partition: found,
        },
    )?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct TightEntry {
    a: Vec<u32>,
    b: Vec<u32>,
}

#[derive(Serialize)]
struct TightnessReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    tight: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    found: Option<Vec<TightEntry>>,
}

fn cmd_tightness(args: TightnessArgs, io: &mut Io) -> Result<i32> {
    let g = read_graph(&args.demands.graph, io)?;
    let report = if args.search {
        let found = search_tight_functions(&g)?;
        note(io, &format!("{} tight demand splits", found.len()));
        TightnessReport {
            tight: None,
            found: Some(
                found
                    .into_iter()
                    .map(|t| TightEntry {
                        a: t.a.into_values(),
                        b: t.b.into_values(),
                    })
                    .collect(),
            ),
        }
    } else {
        let (a, b) = read_demands(&args.demands, g.n())?;
        let tight = verify_tightness(&TightnessInstance::new(g, a, b)?)?;
        note(io, if tight { "tight" } else { "not tight" });
        TightnessReport {
            tight: Some(tight),
            found: None,
        }
    };
    emit(io, &report)?;
    Ok(EXIT_OK)
}

fn parse_grid(items: &[String]) -> Result<Vec<(u32, u32)>> {
    items
        .iter()
        .map(|s| {
            let bad = || Error::Precondition(format!("grid entry {s:?} is not AxB"));
            let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
            Ok((
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}

fn cmd_crosscheck(args: CrosscheckArgs, io: &mut Io) -> Result<i32> {
    let grid = parse_grid(&args.grid)?;
    let mut report: CrosscheckReport = crosscheck(args.n_max, &grid, args.allow_eight)?;
    if args.random > 0 {
        report = report.merge(crosscheck_random(
            args.random,
            args.random_n_lo,
            args.random_n_hi,
            args.seed,
        )?);
    }
    note(
        io,
        &format!(
            "{} graphs, {} instances, {} discrepancies",
            report.graphs,
            report.instances,
            report.discrepancies.len()
        ),
    );
    emit(io, &report)?;
    Ok(if report.is_clean() {
        EXIT_OK
    } else {
        EXIT_DISCREPANCY
    })
}

#[derive(Serialize)]
struct BenchRow {
    q: u64,
    n: usize,
    m: usize,
    a: u32,
    b: u32,
    status: &'static str,
    verified: bool,
    iterations: u64,
    improving_moves: u64,
    plateau_episodes: u64,
    wall_time_ms: u64,
}

fn relabel(g: &Graph, seed: u64) -> Graph {
    let mut perm: Vec<usize> = (0..g.n()).collect();
    SplitMix64::new(seed).shuffle(&mut perm);
    Graph::build(g.n(), g.edges().map(|(u, v)| (perm[u], perm[v])))
        .expect("relabeling keeps the graph simple")
}

fn cmd_bench(args: BenchArgs, io: &mut Io) -> Result<i32> {
    let mut rows = Vec::new();
    let mut code = EXIT_OK;
    for &q in &args.q {
        let half = q.div_ceil(2) as u32;
        let (a, b) = (args.a.unwrap_or(half), args.b.unwrap_or(half));
        if a < 2 || b < 2 || (a + b - 1) as u64 > q {
            return Err(Error::Precondition(format!(
                "q = {q} needs 2 <= a, b and a + b - 1 <= q; got a = {a}, b = {b}"
            )));
        }
        let mut g = er_polarity(q)?.graph;
        if let Some(seed) = args.seed {
            g = relabel(&g, seed);
        }
        let n = g.n();
        let (fa, fb) = (DemandFn::constant(n, a), DemandFn::constant(n, b));
        let start = Instant::now();
        let solved = solve_detailed(&g, &DemandPair::new(fa.clone(), fb.clone()))?;
        let ms = start.elapsed().as_millis() as u64;
        let verified = match &solved.certificate {
            Certificate::FeasiblePartition(bp) => verify_feasible(&g, &fa, &fb, bp)?,
            _ => false,
        };
        if !verified {
            code = EXIT_DIAGNOSTIC;
        }
        note(
            io,
            &format!(
                "q = {q}: n = {n}, {} in {ms} ms",
                solved.certificate.status()
            ),
        );
        rows.push(BenchRow {
            q,
            n,
            m: g.m(),
            a,
            b,
            status: solved.certificate.status(),
            verified,
            iterations: solved.stats.iterations,
            improving_moves: solved.stats.improving_moves,
            plateau_episodes: solved.stats.plateau_episodes,
            wall_time_ms: ms,
        });
    }
    emit(io, &rows)?;
    Ok(code)
}
