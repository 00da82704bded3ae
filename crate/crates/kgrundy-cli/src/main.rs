//! Command-line front end for the solvers, certificates, and audits.
//!
//! Exit codes: 0 on success, 1 when a requested verification or campaign
//! found a failing result (an invalid certificate, a failed audit check, a
//! refuted value), 2 on usage, parse, and capacity errors. Output is stable
//! for fixed inputs: no timestamps, no timing, no entropy, and worker counts
//! never change what is printed.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use kgrundy::constructions;
use kgrundy::forcing;
use kgrundy::lab::{self, AuditInstance, AuditReport, CheckOutcome, CubeStatus};
use kgrundy::sequence::{self, VerifyOutcome};
use kgrundy::solver::{self, OptimalityProof};
use kgrundy::{FamilySpec, Graph, GraphFormat, GrundySequence, SolverConfig, Variant};

#[derive(Parser)]
#[command(
    name = "kgrundy",
    version,
    about = "Exact k-Grundy domination and k-forcing numbers with certificates",
    after_help = "Family specs: cycle:9, path:6, complete:5, kbipartite:4,3, hypercube:4, \
                  grid:3,4, gadget:3, trigrid:3,4, er:12,0.5,7 (seed optional, default 0)."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact value of one variant on one graph, with an optimal certificate
    Solve(SolveArgs),
    /// Lower and upper bounds without an exact search
    Bounds(BoundsArgs),
    /// Check a sequence certificate against a graph
    Verify(VerifyArgs),
    /// Hand-built witness sequences for the special families
    Witness(WitnessArgs),
    /// k-forcing numbers, closure traces, and the reversed Z-sequence
    Forcing(ForcingArgs),
    /// Closed-form value table for a family instance
    Family(FamilyArgs),
    /// Inequality audit campaign over a stream of graphs
    Audit(AuditArgs),
    /// Checkers for the open questions
    #[command(subcommand)]
    Conjecture(ConjectureCmd),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Human,
    Json,
    Csv,
}

#[derive(Copy, Clone, ValueEnum)]
enum FileFormat {
    Graph6,
    Edgelist,
}

impl From<FileFormat> for GraphFormat {
    fn from(f: FileFormat) -> GraphFormat {
        match f {
            FileFormat::Graph6 => GraphFormat::Graph6,
            FileFormat::Edgelist => GraphFormat::EdgeList,
        }
    }
}

#[derive(Args)]
struct SourceArgs {
    /// Family spec such as cycle:6 or kbipartite:4,3
    #[arg(long, value_name = "SPEC", group = "source")]
    family: Option<FamilySpec>,
    /// Graph file; for graph6 the first nonempty line is used
    #[arg(long, value_name = "FILE", group = "source")]
    graph: Option<PathBuf>,
    /// Format of --graph
    #[arg(long, value_enum, default_value_t = FileFormat::Graph6)]
    fmt: FileFormat,
}

impl SourceArgs {
    fn load(&self) -> Result<(String, Graph)> {
        match (&self.family, &self.graph) {
            (Some(spec), None) => Ok((spec.to_string(), spec.generate()?)),
            (None, Some(path)) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let text = match self.fmt {
                    FileFormat::Graph6 => text
                        .lines()
                        .map(str::trim)
                        .find(|l| !l.is_empty())
                        .unwrap_or("")
                        .to_string(),
                    FileFormat::Edgelist => text,
                };
                let g = Graph::parse(&text, self.fmt.into())?;
                Ok((path.display().to_string(), g))
            }
            _ => bail!("exactly one graph source is required: --family SPEC or --graph FILE"),
        }
    }
}

#[derive(Args)]
struct SolverFlags {
    /// Disable the degree-bound stop; optimality is then proven by
    /// exhaustion (same answers, usually slower)
    #[arg(long)]
    no_bound_pruning: bool,
    /// Allow Z-variant searches with k above the minimum degree
    #[arg(long)]
    allow_z_below_delta: bool,
    /// Worker threads; output is identical for every value
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Memo table entry limit
    #[arg(long, value_name = "N")]
    memo_limit: Option<usize>,
    /// Vertex-count guard for exact searches
    #[arg(long, value_name = "N")]
    max_vertices: Option<usize>,
}

impl SolverFlags {
    fn config(&self) -> SolverConfig {
        let mut cfg = SolverConfig::default();
        cfg.use_degree_bound_pruning = !self.no_bound_pruning;
        cfg.allow_z_below_delta = self.allow_z_below_delta;
        cfg.parallel_width = self.jobs.max(1);
        if let Some(m) = self.memo_limit {
            cfg.memo_limit = m;
        }
        if let Some(m) = self.max_vertices {
            cfg.max_vertices = m;
        }
        cfg
    }

    /// Config for campaigns: instances are the parallel unit, so each inner
    /// solve stays single-threaded.
    fn campaign_config(&self) -> SolverConfig {
        let mut cfg = self.config();
        cfg.parallel_width = 1;
        cfg
    }
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (e.g. piping into head) instead of
    // panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Solve(a) => run_solve(a),
        Cmd::Bounds(a) => run_bounds(a),
        Cmd::Verify(a) => run_verify(a),
        Cmd::Witness(a) => run_witness(a),
        Cmd::Forcing(a) => run_forcing(a),
        Cmd::Family(a) => run_family(a),
        Cmd::Audit(a) => run_audit(a),
        Cmd::Conjecture(c) => match c {
            ConjectureCmd::Forcing(a) => run_conj_forcing(a),
            ConjectureCmd::Cube(a) => run_conj_cube(a),
            ConjectureCmd::Product(a) => run_conj_product(a),
        },
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn proof_tag(p: OptimalityProof) -> &'static str {
    match p {
        OptimalityProof::BoundReached => "bound_reached",
        OptimalityProof::Exhaustion => "exhaustion",
    }
}

fn proof_phrase(p: OptimalityProof) -> &'static str {
    match p {
        OptimalityProof::BoundReached => "a sequence met the degree upper bound",
        OptimalityProof::Exhaustion => "the search space was exhausted",
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    variant: Variant,
    #[arg(long)]
    k: u32,
    #[command(flatten)]
    solver: SolverFlags,
    #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,
}

fn run_solve(a: SolveArgs) -> Result<ExitCode> {
    let (label, g) = a.source.load()?;
    let r = solver::grundy_number(&g, a.variant, a.k, &a.solver.config())?;
    match a.format {
        OutputFormat::Human => {
            println!("graph: {label} (n = {}, edges = {})", g.n(), g.edge_count());
            println!("variant: {}, k = {}", a.variant, a.k);
            println!("value: {}", r.value);
            println!("optimality: {}", proof_phrase(r.proof));
            println!("order: {}", join(&r.witness.order));
            println!("footprints: {}", join(&r.witness.witnesses));
        }
        OutputFormat::Json => {
            let out = json!({
                "source": label,
                "n": g.n(),
                "variant": a.variant.tag(),
                "k": a.k,
                "value": r.value,
                "optimality": proof_tag(r.proof),
                "witness": r.witness,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        OutputFormat::Csv => {
            println!("source,n,variant,k,value,optimality,order");
            println!(
                "{label},{},{},{},{},{},{}",
                g.n(),
                a.variant.tag(),
                a.k,
                r.value,
                proof_tag(r.proof),
                join(&r.witness.order)
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    variant: Variant,
    #[arg(long)]
    k: u32,
    #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,
}

fn run_bounds(a: BoundsArgs) -> Result<ExitCode> {
    // Family sources get the construction-aware bounds; files get the
    // greedy/degree pair.
    let (label, b) = match (&a.source.family, &a.source.graph) {
        (Some(spec), None) => (
            spec.to_string(),
            lab::family_bounds(spec, a.variant, a.k)?,
        ),
        _ => {
            let (label, g) = a.source.load()?;
            (label, solver::grundy_bounds(&g, a.variant, a.k)?)
        }
    };
    let pinched = b.lower == b.upper;
    match a.format {
        OutputFormat::Human => {
            println!("graph: {label}");
            println!("variant: {}, k = {}", a.variant, a.k);
            if pinched {
                println!("bounds: [{}, {}] (pinched: the value is exactly {})", b.lower, b.upper, b.lower);
            } else {
                println!("bounds: [{}, {}]", b.lower, b.upper);
            }
            println!("lower-bound witness order: {}", join(&b.lower_witness.order));
        }
        OutputFormat::Json => {
            let out = json!({
                "source": label,
                "variant": a.variant.tag(),
                "k": a.k,
                "lower": b.lower,
                "upper": b.upper,
                "pinched": pinched,
                "witness": b.lower_witness,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        OutputFormat::Csv => {
            println!("source,variant,k,lower,upper,pinched");
            println!(
                "{label},{},{},{},{},{pinched}",
                a.variant.tag(),
                a.k,
                b.lower,
                b.upper
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Sequence certificate JSON (a solve or witness "witness" object)
    #[arg(long, value_name = "FILE")]
    certificate: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,
}

fn run_verify(a: VerifyArgs) -> Result<ExitCode> {
    let (label, g) = a.source.load()?;
    let text = fs::read_to_string(&a.certificate)
        .with_context(|| format!("reading {}", a.certificate.display()))?;
    let seq: GrundySequence = serde_json::from_str(&text)
        .with_context(|| format!("parsing certificate {}", a.certificate.display()))?;
    let report = sequence::verify(&g, &seq)?;
    let valid = matches!(report.outcome, VerifyOutcome::Valid);
    match a.format {
        OutputFormat::Human => {
            println!("graph: {label}");
            println!("variant: {}, k = {}, length = {}", seq.variant, seq.k, seq.len());
            match &report.outcome {
                VerifyOutcome::Valid => println!("valid"),
                VerifyOutcome::Invalid { index, reason } => {
                    println!("invalid at index {index}: {reason}")
                }
            }
            for w in &report.warnings {
                println!("warning: {w}");
            }
        }
        OutputFormat::Json => {
            let out = json!({
                "source": label,
                "length": seq.len(),
                "report": report,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        OutputFormat::Csv => {
            println!("source,variant,k,length,valid");
            println!("{label},{},{},{},{valid}", seq.variant, seq.k, seq.len());
        }
    }
    Ok(if valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[derive(Copy, Clone, ValueEnum)]
enum ConstructionKind {
    /// Cycle sequence for k = 2 in any variant
    Cycle,
    /// Half-cube independent pattern (a vertex set, not a sequence)
    Pattern,
    /// Maximum L-sequence on the d-cube
    Hypercube,
    /// Grid sequence for the plain variant at k = 2
    Grid,
    /// Spanning L-sequence at k = 2 on the tree-cycle gadget
    Gadget,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long, value_enum)]
    construction: ConstructionKind,
    /// Cycle length, or grid columns
    #[arg(long)]
    n: Option<usize>,
    /// Grid rows
    #[arg(long)]
    m: Option<usize>,
    /// Cube dimension
    #[arg(long)]
    d: Option<u32>,
    /// Gadget height
    #[arg(long)]
    h: Option<u32>,
    /// Coverage threshold (hypercube only; the others fix k = 2)
    #[arg(long)]
    k: Option<u32>,
    /// Sequence variant (cycle only)
    #[arg(long)]
    variant: Option<Variant>,
    /// Re-check the sequence with the public verifier and report the outcome
    #[arg(long)]
    verify: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,
}

fn run_witness(a: WitnessArgs) -> Result<ExitCode> {
    let (label, spec, seq) = match a.construction {
        ConstructionKind::Cycle => {
            let n = a.n.context("--construction cycle needs --n")?;
            let variant = a.variant.context("--construction cycle needs --variant")?;
            let seq = constructions::cycle_witness(n, variant)?;
            (format!("cycle:{n}"), FamilySpec::Cycle(n), seq)
        }
        ConstructionKind::Pattern => {
            let d = a.d.context("--construction pattern needs --d")?;
            let pattern = constructions::standard_pattern(d)?;
            match a.format {
                OutputFormat::Human => {
                    println!("half-cube pattern on the {d}-cube ({} vertices):", pattern.len());
                    println!("{}", join(&pattern));
                }
                OutputFormat::Json => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({ "d": d, "pattern": pattern }))?
                    );
                }
                OutputFormat::Csv => {
                    println!("d,vertex");
                    for v in pattern {
                        println!("{d},{v}");
                    }
                }
            }
            return Ok(ExitCode::SUCCESS);
        }
        ConstructionKind::Hypercube => {
            let d = a.d.context("--construction hypercube needs --d")?;
            let k = a.k.context("--construction hypercube needs --k")?;
            let w = constructions::hypercube_l_witness(d, k)?;
            if a.format == OutputFormat::Human {
                for p in &w.phases {
                    println!("phase {} covers steps {}..{}", p.label, p.start, p.end);
                }
            }
            (format!("hypercube:{d}"), FamilySpec::Hypercube(d), w.sequence)
        }
        ConstructionKind::Grid => {
            let m = a.m.context("--construction grid needs --m")?;
            let n = a.n.context("--construction grid needs --n")?;
            let seq = constructions::grid_witness(m, n)?;
            (format!("grid:{m},{n}"), FamilySpec::Grid(m, n), seq)
        }
        ConstructionKind::Gadget => {
            let h = a.h.context("--construction gadget needs --h")?;
            let seq = constructions::gadget_l_witness(h)?;
            (format!("gadget:{h}"), FamilySpec::TreeCycleGadget(h), seq)
        }
    };
    let mut verified = None;
    if a.verify {
        let g = spec.generate()?;
        let report = sequence::verify(&g, &seq)?;
        verified = Some(matches!(report.outcome, VerifyOutcome::Valid));
    }
    match a.format {
        OutputFormat::Human => {
            println!("graph: {label}");
            println!(
                "variant: {}, k = {}, length = {}",
                seq.variant,
                seq.k,
                seq.len()
            );
            println!("order: {}", join(&seq.order));
            println!("footprints: {}", join(&seq.witnesses));
            if let Some(v) = verified {
                println!("verified: {}", if v { "valid" } else { "INVALID" });
            }
        }
        OutputFormat::Json => {
            let out = json!({
                "source": label,
                "length": seq.len(),
                "witness": seq,
                "verified": verified,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        OutputFormat::Csv => {
            println!("source,variant,k,length,step,vertex,footprint");
            for i in 0..seq.len() {
                println!(
                    "{label},{},{},{},{i},{},{}",
                    seq.variant,
                    seq.k,
                    seq.len(),
                    seq.order[i],
                    seq.witnesses[i]
                );
            }
        }
    }
    Ok(match verified {
        Some(false) => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    })
}

#[derive(Args)]
struct ForcingArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    k: u32,
    /// Run the closure from this comma-separated blue set instead of
    /// searching for a minimum one
    #[arg(long, value_delimiter = ',', value_name = "V,V,...")]
    initial: Option<Vec<usize>>,
    /// Also emit the reversed-trace Z-sequence certificate
    #[arg(long)]
    emit_z: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,
}

fn run_forcing(a: ForcingArgs) -> Result<ExitCode> {
    let (label, g) = a.source.load()?;
    let (value, trace) = match &a.initial {
        Some(blue) => {
            let trace = forcing::closure(&g, a.k, blue)?;
            (None, trace)
        }
        None => {
            let r = forcing::k_forcing_number(&g, a.k)?;
            (Some(r.value), r.trace)
        }
    };
    let complete = trace.is_complete(&g);
    let z_seq = if a.emit_z {
        Some(forcing::z_sequence_from_forcing(&g, a.k, &trace)?)
    } else {
        None
    };
    match a.format {
        OutputFormat::Human => {
            println!("graph: {label} (n = {})", g.n());
            match value {
                Some(v) => println!("forcing number (k = {}): {v}", a.k),
                None => println!("closure from a given set (k = {})", a.k),
            }
            println!("initial blue: {}", join(&trace.initial_blue));
            for (i, w) in trace.waves.iter().enumerate() {
                println!("wave {}: {} forces {}", i + 1, w.forcer, join(&w.forced));
            }
            println!(
                "final blue: {} of {} vertices{}",
                trace.final_blue.len(),
                g.n(),
                if complete { " (complete)" } else { "" }
            );
            if let Some(seq) = &z_seq {
                println!("reversed z-sequence order: {}", join(&seq.order));
                println!("reversed z-sequence footprints: {}", join(&seq.witnesses));
            }
        }
        OutputFormat::Json => {
            let out = json!({
                "source": label,
                "n": g.n(),
                "k": a.k,
                "forcing_number": value,
                "trace": trace,
                "complete": complete,
                "z_sequence": z_seq,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        OutputFormat::Csv => {
            println!("source,n,k,forcing_number,initial,complete");
            println!(
                "{label},{},{},{},{},{complete}",
                g.n(),
                a.k,
                value.map(|v| v.to_string()).unwrap_or_default(),
                join(&trace.initial_blue)
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Args)]
struct FamilyArgs {
    /// Family instance to tabulate
    #[arg(long, value_name = "SPEC")]
    spec: FamilySpec,
    /// Largest k to include
    #[arg(long, default_value_t = 3)]
    k_max: u32,
    #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,
}

fn run_family(a: FamilyArgs) -> Result<ExitCode> {
    let rows = constructions::closed_form_table(&a.spec, a.k_max);
    match a.format {
        OutputFormat::Human => {
            if rows.is_empty() {
                println!("no closed forms apply to {} for k <= {}", a.spec, a.k_max);
            }
            for row in &rows {
                let value = match row.value {
                    constructions::ClosedFormValue::Exact(v) => format!("{v}"),
                    constructions::ClosedFormValue::Bounds { lower, upper } => {
                        format!("[{lower}, {upper}]")
                    }
                };
                println!(
                    "{} {} k={}: {} ({})",
                    row.family,
                    row.variant.tag(),
                    row.k,
                    value,
                    row.rule
                );
            }
        }
        OutputFormat::Json => {
            let items: Vec<_> = rows
                .iter()
                .map(|row| {
                    json!({
                        "family": row.family.to_string(),
                        "variant": row.variant.tag(),
                        "k": row.k,
                        "value": row.value,
                        "rule": row.rule,
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&items)?);
        }
        OutputFormat::Csv => {
            println!("{}", constructions::ClosedForm::csv_header());
            for row in &rows {
                println!("{}", row.csv_row());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Instance stream shared by the audit and campaign subcommands: any mix of
/// explicit families, a graph6 stream file, and a seeded random sample.
#[derive(Args)]
struct StreamArgs {
    /// Family instance; repeat for several
    #[arg(long, value_name = "SPEC")]
    family: Vec<FamilySpec>,
    /// graph6 stream file, one graph per line
    #[arg(long, value_name = "FILE")]
    graph: Option<PathBuf>,
    /// Random sample: N,P,COUNT adds COUNT random graphs on N vertices with
    /// edge probability P, seeded seed, seed+1, ...
    #[arg(long, value_name = "N,P,COUNT")]
    er: Option<String>,
    /// First seed for --er
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl StreamArgs {
    fn collect(&self) -> Result<Vec<AuditInstance>> {
        let mut instances = Vec::new();
        for spec in &self.family {
            instances.push(AuditInstance::from_family(spec)?);
        }
        if let Some(path) = &self.graph {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            instances.extend(lab::graph6_stream(&text)?);
        }
        if let Some(er) = &self.er {
            let parts: Vec<&str> = er.split(',').collect();
            if parts.len() != 3 {
                bail!("--er expects N,P,COUNT");
            }
            let n: usize = parts[0].trim().parse().context("--er vertex count")?;
            let p: f64 = parts[1].trim().parse().context("--er probability")?;
            let count: u64 = parts[2].trim().parse().context("--er sample count")?;
            for i in 0..count {
                instances.push(AuditInstance::from_family(&FamilySpec::ErRandom {
                    n,
                    p,
                    seed: self.seed + i,
                })?);
            }
        }
        if instances.is_empty() {
            bail!("no instances: give --family, --graph, or --er");
        }
        Ok(instances)
    }
}

#[derive(Args)]
struct AuditArgs {
    #[command(flatten)]
    stream: StreamArgs,
    /// Coverage thresholds to audit, e.g. 1,2,3
    #[arg(long, value_delimiter = ',', required = true, value_name = "K,K,...")]
    ks: Vec<u32>,
    #[command(flatten)]
    solver: SolverFlags,
    /// Only print instances whose L-sequence uses every vertex
    #[arg(long)]
    spanning_only: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,
}

fn print_report(report: &AuditReport, format: OutputFormat, spanning_only: bool) -> Result<()> {
    let mut shown = report.clone();
    if spanning_only {
        shown.entries.retain(|e| e.l_reaches_n);
    }
    match format {
        OutputFormat::Human => {
            let c = report.counts();
            println!(
                "campaign {}: {} entries, {} checks pass, {} fail, {} skipped",
                report.campaign,
                report.entries.len(),
                c.pass,
                c.fail,
                c.skipped
            );
            for (entry, check) in report.failures() {
                let detail = match &check.outcome {
                    CheckOutcome::Fail { counterexample } => counterexample.detail.clone(),
                    _ => String::new(),
                };
                println!(
                    "FAIL {} (n = {}, k = {}): {}: {detail}",
                    entry.instance, entry.n, entry.k, check.name
                );
            }
            if spanning_only {
                println!("instances where the L-sequence spans all vertices:");
                for e in &shown.entries {
                    println!("  {} (n = {}, k = {})", e.instance, e.n, e.k);
                }
            }
        }
        OutputFormat::Json => print!("{}", shown.to_jsonl()?),
        OutputFormat::Csv => print!("{}", shown.csv_summary()),
    }
    Ok(())
}

fn run_audit(a: AuditArgs) -> Result<ExitCode> {
    let instances = a.stream.collect()?;
    let report = lab::audit_bounds(&instances, &a.ks, &a.solver.campaign_config(), a.solver.jobs)?;
    print_report(&report, a.format, a.spanning_only)?;
    Ok(if report.is_clean() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[derive(Subcommand)]
enum ConjectureCmd {
    /// Compare the Z value with n minus the k-forcing number over a stream
    Forcing(ConjForcingArgs),
    /// Test the conjectured L-value of the d-cube
    Cube(ConjCubeArgs),
    /// Compare the L value of a box product with the product of the factors'
    /// values
    Product(ConjProductArgs),
}

#[derive(Args)]
struct ConjForcingArgs {
    #[command(flatten)]
    stream: StreamArgs,
    #[arg(long)]
    k: u32,
    #[command(flatten)]
    solver: SolverFlags,
    #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,
}

fn run_conj_forcing(a: ConjForcingArgs) -> Result<ExitCode> {
    let instances = a.stream.collect()?;
    let report = lab::forcing_conjecture_campaign(
        &instances,
        a.k,
        &a.solver.campaign_config(),
        a.solver.jobs,
    )?;
    print_report(&report, a.format, false)?;
    Ok(if report.is_clean() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[derive(Args)]
struct ConjCubeArgs {
    /// Cube dimension
    #[arg(long)]
    d: u32,
    #[arg(long)]
    k: u32,
    #[command(flatten)]
    solver: SolverFlags,
    #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,
}

fn run_conj_cube(a: ConjCubeArgs) -> Result<ExitCode> {
    let report = lab::check_cube_conjecture(a.d, a.k, &a.solver.config())?;
    let refuted = matches!(report.status, CubeStatus::RefutedExact { .. });
    match a.format {
        OutputFormat::Human => {
            println!("d = {}, k = {}, conjectured value {}", report.d, report.k, report.conjectured);
            match report.status {
                CubeStatus::ConfirmedExact { value } => {
                    println!("confirmed by exact search: value {value}")
                }
                CubeStatus::ConfirmedPinch { value } => println!(
                    "confirmed by bound pinch: construction and degree bound meet at {value}"
                ),
                CubeStatus::Undecided { lower, upper } => {
                    println!("undecided at this size: interval [{lower}, {upper}]")
                }
                CubeStatus::RefutedExact { value, conjectured } => {
                    println!("REFUTED: exact value {value}, conjectured {conjectured}")
                }
            }
            println!("constructive witness length: {}", report.witness.len());
        }
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        OutputFormat::Csv => {
            println!("d,k,conjectured,status,lower,upper");
            let (status, lo, hi) = match report.status {
                CubeStatus::ConfirmedExact { value } => ("confirmed_exact", value, value),
                CubeStatus::ConfirmedPinch { value } => ("confirmed_pinch", value, value),
                CubeStatus::Undecided { lower, upper } => ("undecided", lower, upper),
                CubeStatus::RefutedExact { value, .. } => ("refuted_exact", value, value),
            };
            println!("{},{},{},{status},{lo},{hi}", report.d, report.k, report.conjectured);
        }
    }
    Ok(if refuted {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

#[derive(Args)]
struct ConjProductArgs {
    /// Left factor family
    #[arg(long, value_name = "SPEC")]
    left: FamilySpec,
    /// Right factor family
    #[arg(long, value_name = "SPEC")]
    right: FamilySpec,
    #[arg(long)]
    k: u32,
    #[command(flatten)]
    solver: SolverFlags,
    #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,
}

fn run_conj_product(a: ConjProductArgs) -> Result<ExitCode> {
    let g = a.left.generate()?;
    let h = a.right.generate()?;
    let report = lab::check_product_question(&g, &h, a.k, &a.solver.config())?;
    match a.format {
        OutputFormat::Human => {
            println!("factors: {} and {}, k = {}", a.left, a.right, a.k);
            println!(
                "hypothesis (both minimum degrees >= k): {}",
                if report.hypothesis_met { "met" } else { "NOT met; values reported anyway" }
            );
            let lhs = match report.lhs {
                constructions::ClosedFormValue::Exact(v) => format!("{v}"),
                constructions::ClosedFormValue::Bounds { lower, upper } => {
                    format!("[{lower}, {upper}]")
                }
            };
            println!("product value: {lhs}");
            println!(
                "factor values: {} * {} = {}",
                report.left_factor, report.right_factor, report.rhs
            );
            let relation = match report.relation {
                lab::ProductRelation::Equal => "equal",
                lab::ProductRelation::LhsLess => "product value is smaller",
                lab::ProductRelation::LhsGreater => "product value is larger",
                lab::ProductRelation::Undecided => "undecided at this size",
            };
            println!("relation: {relation}");
        }
        OutputFormat::Json => {
            let out = json!({
                "left": a.left.to_string(),
                "right": a.right.to_string(),
                "report": report,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        OutputFormat::Csv => {
            let (lo, hi) = match report.lhs {
                constructions::ClosedFormValue::Exact(v) => (v, v),
                constructions::ClosedFormValue::Bounds { lower, upper } => (lower, upper),
            };
            println!("left,right,k,hypothesis_met,lhs_lower,lhs_upper,rhs,relation");
            println!(
                "{},{},{},{},{lo},{hi},{},{:?}",
                a.left, a.right, a.k, report.hypothesis_met, report.rhs, report.relation
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}
