//! Experiment runner: algorithm x graph x seeds, oracle verification and
//! the per-phase stats CSV.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algorithms::{AlgoConfig, AlgoError, Algorithm, RunResult};
use crate::contraction::PhaseLedgerEntry;
use crate::generators::{generate, GenError, GenSpec};
use crate::graph::{
    load_edge_list, union_find_components, write_assignment_tsv, ComponentAssignment, Graph,
    GraphError, IdTable, VertexId,
};
use crate::mpc::CostModel;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid experiment: {0}")]
    Spec(String),
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: GraphError },
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

const DEFAULT_MACHINES: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub algorithm: Algorithm,
    #[serde(default)]
    pub config: AlgoConfig,
    /// Generated input. Exactly one of `graph` and `input` must be set.
    #[serde(default)]
    pub graph: Option<GenSpec>,
    /// Edge-list file.
    #[serde(default)]
    pub input: Option<PathBuf>,
    /// Algorithm seeds; each run sets `config.global_seed`.
    pub seeds: Vec<u64>,
    /// Draw a fresh graph per seed (generated inputs only).
    #[serde(default)]
    pub resample_graph: bool,
    #[serde(default)]
    pub stats_csv: Option<PathBuf>,
    /// Assignment of the first seed's run.
    #[serde(default)]
    pub assignment_tsv: Option<PathBuf>,
    #[serde(default)]
    pub strict_space: bool,
    #[serde(default)]
    pub machines: Option<usize>,
}

impl ExperimentSpec {
    pub fn new(algorithm: Algorithm, graph: GenSpec, seeds: Vec<u64>) -> Self {
        ExperimentSpec {
            algorithm,
            config: AlgoConfig::default(),
            graph: Some(graph),
            input: None,
            seeds,
            resample_graph: false,
            stats_csv: None,
            assignment_tsv: None,
            strict_space: false,
            machines: None,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.seeds.is_empty() {
            return Err(BenchError::Spec("at least one seed is required".into()));
        }
        match (&self.graph, &self.input) {
            (Some(_), None) | (None, Some(_)) => {}
            _ => {
                return Err(BenchError::Spec(
                    "exactly one of `graph` and `input` must be given".into(),
                ))
            }
        }
        if self.resample_graph && self.input.is_some() {
            return Err(BenchError::Spec("resample_graph needs a generated graph".into()));
        }
        if self.machines == Some(0) {
            return Err(BenchError::Spec("machines must be at least 1".into()));
        }
        Ok(())
    }

    /// Algorithm configuration for one seed on a graph of the given size.
    pub fn config_for(&self, seed: u64, n: usize, m: usize) -> AlgoConfig {
        let mut cfg = AlgoConfig {
            global_seed: seed,
            ..self.config.clone()
        };
        if self.strict_space {
            let strict = CostModel::strict(self.machines.unwrap_or(DEFAULT_MACHINES), n, m);
            cfg.cost.machines = strict.machines;
            cfg.cost.per_machine_receive_budget = strict.per_machine_receive_budget;
        } else if let Some(p) = self.machines {
            cfg.cost.machines = p;
        }
        cfg
    }
}

/// Oracle comparison of one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub pass: bool,
    pub expected_components: usize,
    pub found_components: usize,
    /// Up to ten vertices whose class differs: `(vertex, expected
    /// representative, found representative)`, minimum-member labels.
    pub witnesses: Vec<(VertexId, VertexId, VertexId)>,
}

pub const MAX_WITNESSES: usize = 10;

/// Compares `assignment` with union-find components of `g`.
pub fn verify(assignment: &ComponentAssignment, g: &Graph) -> Result<VerifyReport, GraphError> {
    if assignment.len() != g.n() {
        return Err(GraphError::UniverseMismatch {
            left: assignment.len(),
            right: g.n(),
        });
    }
    let expected = union_find_components(g.edges(), g.n())?;
    // Minimum-member labels are unique per partition, so comparing them
    // pointwise decides equality.
    let found = assignment.canonical();
    let mut witnesses = Vec::new();
    let mut pass = true;
    for v in g.vertices() {
        let (e, f) = (expected.label(v), found.label(v));
        if e != f {
            pass = false;
            if witnesses.len() < MAX_WITNESSES {
                witnesses.push((v, e, f));
            } else {
                break;
            }
        }
    }
    Ok(VerifyReport {
        pass,
        expected_components: expected.num_components(),
        found_components: found.num_components(),
        witnesses,
    })
}

/// `edges_i / edges_{i+1}` for consecutive phases.
pub fn edge_decay_report(phases: &[PhaseLedgerEntry]) -> Vec<f64> {
    phases
        .windows(2)
        .map(|w| w[0].edges_in as f64 / w[1].edges_in as f64)
        .collect()
}

/// Lower median; exact for odd lengths.
pub fn median<T: Ord + Copy>(values: &[T]) -> Option<T> {
    let mut v = values.to_vec();
    v.sort_unstable();
    v.get(v.len().saturating_sub(1) / 2).copied()
}

/// One line of the stats CSV.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsRow {
    pub algorithm: String,
    pub n0: u64,
    pub m0: u64,
    /// A seed, or `median` on the summary row.
    pub seed: String,
    /// Phase index, `abort:<reason>` for a failed run, or the median phase
    /// count on the summary row.
    pub phase: String,
    pub nodes_in: Option<u64>,
    pub edges_in: Option<u64>,
    pub rounds: Option<u64>,
    pub messages: Option<u64>,
    pub dht_puts: Option<u64>,
    pub dht_gets: Option<u64>,
}

pub fn write_stats_csv<W: Write>(rows: &[StatsRow], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug)]
pub struct SeedRun {
    pub seed: u64,
    pub n0: usize,
    pub m0: usize,
    pub result: Result<RunResult, AlgoError>,
    /// Oracle verdict; `None` for aborted runs.
    pub verify: Option<VerifyReport>,
}

#[derive(Debug)]
pub struct ExperimentReport {
    pub algorithm: Algorithm,
    pub runs: Vec<SeedRun>,
    pub rows: Vec<StatsRow>,
}

impl ExperimentReport {
    pub fn all_verified(&self) -> bool {
        self.runs
            .iter()
            .all(|r| r.verify.as_ref().is_some_and(|v| v.pass))
    }

    pub fn any_aborted(&self) -> bool {
        self.runs.iter().any(|r| r.result.is_err())
    }

    /// Median phase count over successful runs.
    pub fn median_phases(&self) -> Option<usize> {
        let counts: Vec<usize> = self
            .runs
            .iter()
            .filter_map(|r| r.result.as_ref().ok().map(RunResult::phase_count))
            .collect();
        median(&counts)
    }
}

fn phase_rows(algorithm: Algorithm, run: &SeedRun, rows: &mut Vec<StatsRow>) {
    let base = |phase: String| StatsRow {
        algorithm: algorithm.name().to_string(),
        n0: run.n0 as u64,
        m0: run.m0 as u64,
        seed: run.seed.to_string(),
        phase,
        nodes_in: None,
        edges_in: None,
        rounds: None,
        messages: None,
        dht_puts: None,
        dht_gets: None,
    };
    let entries = match &run.result {
        Ok(r) => &r.phases,
        Err(e) => match e.partial() {
            Some(p) => &p.phases,
            None => &Vec::new(),
        },
    };
    for p in entries {
        rows.push(StatsRow {
            nodes_in: Some(p.nodes_in),
            edges_in: Some(p.edges_in),
            rounds: Some(p.rounds_used),
            messages: Some(p.messages_sent),
            dht_puts: Some(p.dht_puts),
            dht_gets: Some(p.dht_gets),
            ..base(p.phase_index.to_string())
        });
    }
    if let Err(e) = &run.result {
        let totals = e.partial().map(|p| p.ledger.totals()).unwrap_or_default();
        rows.push(StatsRow {
            rounds: Some(totals.rounds),
            messages: Some(totals.records),
            dht_puts: Some(totals.dht_puts),
            dht_gets: Some(totals.dht_gets),
            ..base(format!("abort:{}", e.kind()))
        });
    }
}

fn summary_row(algorithm: Algorithm, runs: &[SeedRun]) -> Option<StatsRow> {
    let ok: Vec<&RunResult> = runs.iter().filter_map(|r| r.result.as_ref().ok()).collect();
    let phases = median(&ok.iter().map(|r| r.phase_count()).collect::<Vec<_>>())?;
    let totals: Vec<_> = ok.iter().map(|r| r.ledger.totals()).collect();
    let med = |f: fn(&crate::mpc::LedgerTotals) -> u64| {
        median(&totals.iter().map(f).collect::<Vec<_>>())
    };
    Some(StatsRow {
        algorithm: algorithm.name().to_string(),
        n0: median(&runs.iter().map(|r| r.n0 as u64).collect::<Vec<_>>())?,
        m0: median(&runs.iter().map(|r| r.m0 as u64).collect::<Vec<_>>())?,
        seed: "median".to_string(),
        phase: phases.to_string(),
        nodes_in: None,
        edges_in: None,
        rounds: med(|t| t.rounds),
        messages: med(|t| t.records),
        dht_puts: med(|t| t.dht_puts),
        dht_gets: med(|t| t.dht_gets),
    })
}

fn load_input(path: &PathBuf) -> Result<(Graph, IdTable), BenchError> {
    let file = File::open(path)?;
    load_edge_list(BufReader::new(file)).map_err(|source| BenchError::Input {
        path: path.clone(),
        source,
    })
}

/// Runs every seed, verifies each successful run against union-find,
/// writes the requested outputs, and returns the rows (ordered by seed,
/// then phase, then the summary row).
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport, BenchError> {
    spec.validate()?;
    let mut seeds = spec.seeds.clone();
    seeds.sort_unstable();
    seeds.dedup();

    let fixed = match (&spec.input, &spec.graph) {
        (Some(path), _) => Some(load_input(path)?),
        (None, Some(gs)) if !spec.resample_graph => {
            let g = generate(gs)?;
            let ids = IdTable::identity(g.n());
            Some((g, ids))
        }
        _ => None,
    };

    let mut runs = Vec::with_capacity(seeds.len());
    let mut rows = Vec::new();
    for (i, &seed) in seeds.iter().enumerate() {
        let drawn;
        let (g, ids) = match &fixed {
            Some((g, ids)) => (g, ids),
            None => {
                let gs = spec.graph.as_ref().expect("validated");
                let g = generate(&GenSpec { seed, ..gs.clone() })?;
                let ids = IdTable::identity(g.n());
                drawn = (g, ids);
                (&drawn.0, &drawn.1)
            }
        };
        let cfg = spec.config_for(seed, g.n(), g.m());
        let result = spec.algorithm.run(g, &cfg);
        let verify = match &result {
            Ok(r) => Some(verify(&r.assignment, g)?),
            Err(_) => None,
        };
        if i == 0 {
            if let (Some(path), Ok(r)) = (&spec.assignment_tsv, &result) {
                write_assignment_tsv(&r.assignment, ids, BufWriter::new(File::create(path)?))?;
            }
        }
        let run = SeedRun {
            seed,
            n0: g.n(),
            m0: g.m(),
            result,
            verify,
        };
        phase_rows(spec.algorithm, &run, &mut rows);
        runs.push(run);
    }
    rows.extend(summary_row(spec.algorithm, &runs));

    if let Some(path) = &spec.stats_csv {
        write_stats_csv(&rows, BufWriter::new(File::create(path)?))?;
    }
    Ok(ExperimentReport {
        algorithm: spec.algorithm,
        runs,
        rows,
    })
}
