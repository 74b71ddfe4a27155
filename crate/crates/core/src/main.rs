use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cc_contract::algorithms::{AlgoConfig, AlgoError, Algorithm};
use cc_contract::bench::{
    run_experiment, verify, write_stats_csv, BenchError, ExperimentReport, ExperimentSpec,
};
use cc_contract::generators::{generate, Family, GenSpec};
use cc_contract::graph::{
    load_edge_list, read_assignment_tsv, write_edge_list, ComponentAssignment, IdTable,
};

const EXIT_VERIFY: u8 = 1;
const EXIT_ABORT: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "cc-contract", version, about = "Connected components by graph contraction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it as an edge list.
    Gen(GenArgs),
    /// Run one algorithm on one graph and verify the result.
    Run(RunArgs),
    /// Run a JSON list of experiments.
    Bench(BenchArgs),
    /// Check a component assignment against an edge list.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.0)]
    p: f64,
    /// Pendant vertices per spine vertex (caterpillar).
    #[arg(long, default_value_t = 0)]
    legs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_parser = parse_algorithm)]
    algo: Algorithm,
    /// Edge-list file.
    #[arg(long, conflicts_with = "gen_spec", required_unless_present = "gen_spec")]
    input: Option<PathBuf>,
    /// Generator spec as inline JSON or a path to a JSON file.
    #[arg(long)]
    gen_spec: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    stats_csv: Option<PathBuf>,
    #[arg(long)]
    assignment_out: Option<PathBuf>,
    #[arg(long)]
    strict_space: bool,
    #[arg(long)]
    machines: Option<usize>,
    #[arg(long)]
    finalize_threshold: Option<u64>,
    #[arg(long)]
    max_phases: Option<usize>,
}

#[derive(Args)]
struct BenchArgs {
    /// JSON file holding a list of experiment specs.
    #[arg(long)]
    spec_file: PathBuf,
    /// Also write every experiment's rows to one CSV.
    #[arg(long)]
    stats_csv: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    assignment: PathBuf,
}

fn parse_family(s: &str) -> Result<Family, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse()
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Verify(String),
    Abort(String),
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Run(a) => cmd_run(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (EXIT_USAGE, m),
                Failure::Verify(m) => (EXIT_VERIFY, m),
                Failure::Abort(m) => (EXIT_ABORT, m),
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn cmd_gen(a: GenArgs) -> Result<(), Failure> {
    let spec = GenSpec {
        family: a.family,
        n: a.n,
        p: a.p,
        legs: a.legs,
        seed: a.seed,
        ..GenSpec::default()
    };
    let g = generate(&spec).map_err(|e| Failure::Usage(e.to_string()))?;
    let ids = IdTable::identity(g.n());
    match a.out {
        Some(path) => write_edge_list(&g, &ids, BufWriter::new(File::create(path)?))?,
        None => write_edge_list(&g, &ids, BufWriter::new(io::stdout().lock()))?,
    }
    Ok(())
}

fn read_gen_spec(arg: &str) -> Result<GenSpec, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg)?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("bad generator spec: {e}")))
}

/// Exit status of a finished experiment: aborts first, then verification.
fn judge(report: &ExperimentReport) -> Result<(), Failure> {
    for run in &report.runs {
        match &run.result {
            Err(e @ AlgoError::Config(_)) => return Err(Failure::Usage(e.to_string())),
            Err(e) if e.is_abort() => {
                return Err(Failure::Abort(format!(
                    "{} seed {}: {e}",
                    report.algorithm, run.seed
                )))
            }
            Err(e) => return Err(Failure::Abort(e.to_string())),
            Ok(_) => {}
        }
        if let Some(v) = run.verify.as_ref().filter(|v| !v.pass) {
            return Err(Failure::Verify(format!(
                "{} seed {}: partition differs from union-find (expected {} components, found {}); witnesses (vertex, expected, found): {:?}",
                report.algorithm, run.seed, v.expected_components, v.found_components, v.witnesses
            )));
        }
    }
    Ok(())
}

fn print_summary(report: &ExperimentReport) {
    for run in &report.runs {
        if let Ok(r) = &run.result {
            let t = r.ledger.totals();
            println!(
                "{} seed={} n={} m={} phases={} rounds={} messages={} dht_gets={} components={} verified={}",
                report.algorithm,
                run.seed,
                run.n0,
                run.m0,
                r.phase_count(),
                t.rounds,
                t.records,
                t.dht_gets,
                r.assignment.num_components(),
                run.verify.as_ref().is_some_and(|v| v.pass)
            );
        }
    }
}

fn cmd_run(a: RunArgs) -> Result<(), Failure> {
    let graph = a.gen_spec.as_deref().map(read_gen_spec).transpose()?;
    let defaults = AlgoConfig::default();
    let spec = ExperimentSpec {
        algorithm: a.algo,
        config: AlgoConfig {
            finalize_threshold: a.finalize_threshold.unwrap_or(defaults.finalize_threshold),
            max_phases: a.max_phases,
            ..defaults
        },
        graph,
        input: a.input,
        seeds: vec![a.seed],
        resample_graph: false,
        stats_csv: a.stats_csv,
        assignment_tsv: a.assignment_out,
        strict_space: a.strict_space,
        machines: a.machines,
    };
    let report = run_experiment(&spec)?;
    print_summary(&report);
    judge(&report)
}

fn cmd_bench(a: BenchArgs) -> Result<(), Failure> {
    let text = fs::read_to_string(&a.spec_file)?;
    let specs: Vec<ExperimentSpec> = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", a.spec_file.display())))?;
    let mut reports = Vec::new();
    for spec in &specs {
        let report = run_experiment(spec)?;
        print_summary(&report);
        reports.push(report);
    }
    if let Some(path) = a.stats_csv {
        let mut rows: Vec<_> = reports.iter().flat_map(|r| r.rows.iter().cloned()).collect();
        // Stable sort keeps seed and phase order inside each algorithm.
        rows.sort_by(|x, y| x.algorithm.cmp(&y.algorithm));
        write_stats_csv(&rows, BufWriter::new(File::create(path)?))?;
    }
    reports.iter().try_for_each(judge)
}

fn cmd_verify(a: VerifyArgs) -> Result<(), Failure> {
    let (g, ids) = load_edge_list(BufReader::new(File::open(&a.input)?))
        .map_err(|e| Failure::Usage(format!("{}: {e}", a.input.display())))?;
    let rows = read_assignment_tsv(BufReader::new(File::open(&a.assignment)?))
        .map_err(|e| Failure::Usage(format!("{}: {e}", a.assignment.display())))?;
    let mut rep: Vec<Option<u64>> = vec![None; g.n()];
    for (ext, r) in rows {
        let v = ids.dense(ext).ok_or_else(|| {
            Failure::Verify(format!("vertex {ext} is not in the input graph"))
        })?;
        rep[v as usize] = Some(r);
    }
    if let Some(v) = rep.iter().position(Option::is_none) {
        return Err(Failure::Verify(format!(
            "vertex {} has no assignment",
            ids.external(v as u32)
        )));
    }
    let assignment = ComponentAssignment::from_class_keys(rep.into_iter().map(Option::unwrap));
    let report = verify(&assignment, &g).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut out = io::stdout().lock();
    if report.pass {
        writeln!(out, "ok: {} components", report.expected_components)?;
        Ok(())
    } else {
        let w: Vec<_> = report
            .witnesses
            .iter()
            .map(|&(v, e, f)| (ids.external(v), ids.external(e), ids.external(f)))
            .collect();
        Err(Failure::Verify(format!(
            "partition differs from union-find (expected {} components, found {}); witnesses (vertex, expected, found): {w:?}",
            report.expected_components, report.found_components
        )))
    }
}
