//! Connected-components algorithms over the simulated MPC substrate.
//!
//! Contraction based algorithms (LocalContraction, TreeContraction, Cracker)
//! share one phase driver: sample an ordering, compute labels, contract,
//! prune isolated nodes, and finish on a single machine once the graph is
//! small. Hash-Min and Hash-to-Min are round based label propagation.

mod cracker;
mod driver;
mod hash_min;
mod hash_to_min;
mod local;
mod tree;

pub use cracker::{cracker_rewire, run_cracker};
pub use driver::finalize_small_graph;
pub use hash_min::run_hash_min;
pub use hash_to_min::run_hash_to_min;
pub use local::{
    local_contraction_labels, merge_to_large_labels, merge_to_large_select, run_local_contraction,
    AlphaSchedule,
};
pub use tree::{
    functional_wcc_dht, functional_wcc_pointer_jumping, run_tree_contraction, tree_functional_graph,
    ChaseReport, FunctionalGraph, PointerJumpReport, TreeVariant,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contraction::{ContractionError, PhaseLedgerEntry};
use crate::graph::{ComponentAssignment, Graph};
use crate::mpc::{CostModel, MpcError, PassKind, RoundLedger, Traffic};

/// How each phase orders its vertices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrioritySource {
    /// Seeded hash of `(global_seed, phase, id)`.
    #[default]
    Hashed,
    /// Order by current node id. Deterministic; used for hand traces.
    Identity,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderingMode {
    /// Fresh hashes every phase.
    #[default]
    Resample,
    /// Hashes of the first phase are carried along; a contracted node keeps
    /// the smallest hash of its members.
    Reuse,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AlgoConfig {
    pub global_seed: u64,
    /// Remaining graphs with at most this many edges are solved on one
    /// machine. Zero disables finalization.
    pub finalize_threshold: u64,
    pub merge_to_large_enabled: bool,
    /// Initial large-node threshold in original vertices. `None` picks
    /// `max(2, ceil(4 ln n))`.
    pub alpha0: Option<u64>,
    /// Exponent applied to alpha between phases.
    pub alpha_growth: f64,
    /// `None` picks a default per algorithm.
    pub max_phases: Option<usize>,
    pub priority: PrioritySource,
    pub ordering: OrderingMode,
    /// Hash-to-Min aborts when a round delivers more than this many records
    /// per input edge.
    pub message_cap_per_edge: u64,
    pub cost: CostModel,
}

impl Default for AlgoConfig {
    fn default() -> Self {
        AlgoConfig {
            global_seed: 0,
            finalize_threshold: 1_000_000,
            merge_to_large_enabled: false,
            alpha0: None,
            alpha_growth: 2.0,
            max_phases: None,
            priority: PrioritySource::Hashed,
            ordering: OrderingMode::Resample,
            message_cap_per_edge: 64,
            cost: CostModel::default(),
        }
    }
}

impl AlgoConfig {
    pub fn with_seed(seed: u64) -> Self {
        AlgoConfig {
            global_seed: seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), AlgoError> {
        if let Some(a) = self.alpha0 {
            if a < 2 {
                return Err(AlgoError::Config(format!("alpha0 must be at least 2, got {a}")));
            }
        }
        if !(self.alpha_growth.is_finite() && self.alpha_growth >= 1.0) {
            return Err(AlgoError::Config(format!(
                "alpha_growth must be a finite exponent >= 1, got {}",
                self.alpha_growth
            )));
        }
        if self.max_phases == Some(0) {
            return Err(AlgoError::Config("max_phases must be at least 1".into()));
        }
        if self.cost.machines == 0 {
            return Err(AlgoError::Config("machines must be at least 1".into()));
        }
        Ok(())
    }

    /// `4 log2 n + 16`.
    pub fn default_max_phases(n: usize) -> usize {
        let lg = (n.max(2) as f64).log2();
        (4.0 * lg).ceil() as usize + 16
    }

    fn max_phases_or(&self, default: usize) -> usize {
        self.max_phases.unwrap_or(default)
    }
}

/// State of a run when it was aborted.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PartialRun {
    pub phases: Vec<PhaseLedgerEntry>,
    pub ledger: RoundLedger,
}

#[derive(Debug, Error)]
pub enum AlgoError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("did not converge within {limit} phases")]
    MaxPhases {
        limit: usize,
        partial: Box<PartialRun>,
    },
    #[error("{source}")]
    Budget {
        source: MpcError,
        partial: Box<PartialRun>,
    },
    #[error("round {round} delivers {records} records, cap is {cap}")]
    MessageCap {
        round: usize,
        records: u64,
        cap: u64,
        partial: Box<PartialRun>,
    },
    #[error("graph has {m} edges, above the finalization threshold {threshold}")]
    FinalizeRefused { m: u64, threshold: u64 },
    #[error(transparent)]
    Contraction(#[from] ContractionError),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<MpcError> for AlgoError {
    fn from(source: MpcError) -> Self {
        AlgoError::Budget {
            source,
            partial: Box::default(),
        }
    }
}

impl AlgoError {
    /// Errors that end a run early (as opposed to misuse).
    pub fn is_abort(&self) -> bool {
        matches!(
            self,
            AlgoError::MaxPhases { .. } | AlgoError::Budget { .. } | AlgoError::MessageCap { .. }
        )
    }

    pub fn partial(&self) -> Option<&PartialRun> {
        match self {
            AlgoError::MaxPhases { partial, .. }
            | AlgoError::Budget { partial, .. }
            | AlgoError::MessageCap { partial, .. } => Some(partial),
            _ => None,
        }
    }

    pub(crate) fn with_partial(mut self, phases: &[PhaseLedgerEntry], ledger: &RoundLedger) -> Self {
        if let AlgoError::MaxPhases { partial, .. }
        | AlgoError::Budget { partial, .. }
        | AlgoError::MessageCap { partial, .. } = &mut self
        {
            **partial = PartialRun {
                phases: phases.to_vec(),
                ledger: ledger.clone(),
            };
        }
        self
    }

    /// Short tag used in stats rows.
    pub fn kind(&self) -> &'static str {
        match self {
            AlgoError::Config(_) => "config",
            AlgoError::MaxPhases { .. } => "max_phases",
            AlgoError::Budget { .. } => "space_violation",
            AlgoError::MessageCap { .. } => "message_cap",
            AlgoError::FinalizeRefused { .. } => "finalize_refused",
            AlgoError::Contraction(_) => "contraction",
            AlgoError::Internal(_) => "internal",
        }
    }
}

/// Per-phase details beyond the ledger, for diagnostics and tests.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseDiagnostics {
    /// Nodes of the contracted graph before pruning.
    pub nodes_out: u64,
    pub edges_out: u64,
    /// Nodes left after pruning isolated ones.
    pub survivors: u64,
    pub pj_iterations: Option<u32>,
    /// Largest `d(v)` seen (both tree variants).
    pub max_chase_depth: Option<u64>,
    pub alpha: Option<u64>,
    pub large_nodes: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub assignment: ComponentAssignment,
    pub phases: Vec<PhaseLedgerEntry>,
    pub diagnostics: Vec<PhaseDiagnostics>,
    pub ledger: RoundLedger,
    pub converged: bool,
    /// Edges handed to single-machine finalization, if it ran.
    pub finalized_edges: Option<u64>,
}

impl RunResult {
    pub fn phase_count(&self) -> usize {
        self.phases.len()
    }

    pub fn rounds(&self) -> u64 {
        self.ledger.totals().rounds
    }

    pub fn records(&self) -> u64 {
        self.ledger.totals().records
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "local")]
    Local,
    #[serde(rename = "local+mtl")]
    LocalMtl,
    #[serde(rename = "tree-pj")]
    TreePj,
    #[serde(rename = "tree-dht")]
    TreeDht,
    #[serde(rename = "hashmin")]
    HashMin,
    #[serde(rename = "hash2min")]
    HashToMin,
    #[serde(rename = "cracker")]
    Cracker,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Local,
        Algorithm::LocalMtl,
        Algorithm::TreePj,
        Algorithm::TreeDht,
        Algorithm::HashMin,
        Algorithm::HashToMin,
        Algorithm::Cracker,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Local => "local",
            Algorithm::LocalMtl => "local+mtl",
            Algorithm::TreePj => "tree-pj",
            Algorithm::TreeDht => "tree-dht",
            Algorithm::HashMin => "hashmin",
            Algorithm::HashToMin => "hash2min",
            Algorithm::Cracker => "cracker",
        }
    }

    pub fn run(self, g: &Graph, cfg: &AlgoConfig) -> Result<RunResult, AlgoError> {
        match self {
            Algorithm::Local => run_local_contraction(
                g,
                &AlgoConfig {
                    merge_to_large_enabled: false,
                    ..cfg.clone()
                },
            ),
            Algorithm::LocalMtl => run_local_contraction(
                g,
                &AlgoConfig {
                    merge_to_large_enabled: true,
                    ..cfg.clone()
                },
            ),
            Algorithm::TreePj => run_tree_contraction(g, cfg, TreeVariant::PointerJumping),
            Algorithm::TreeDht => run_tree_contraction(g, cfg, TreeVariant::Dht),
            Algorithm::HashMin => run_hash_min(g, cfg),
            Algorithm::HashToMin => run_hash_to_min(g, cfg),
            Algorithm::Cracker => run_cracker(g, cfg),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Algorithm::ALL.iter().map(|a| a.name()).collect();
                format!("unknown algorithm {s:?}; expected one of {}", names.join(", "))
            })
    }
}

/// Rounds in which every vertex receives one combined record.
pub(crate) fn charge_vertices(
    ledger: &mut RoundLedger,
    kind: PassKind,
    n: usize,
    rounds: u32,
) -> Result<(), MpcError> {
    let t = vertex_traffic(ledger, n);
    ledger.charge_repeated(kind, rounds, &t)
}

/// One record per vertex, keyed by the vertex.
pub(crate) fn vertex_traffic(ledger: &RoundLedger, n: usize) -> Traffic {
    let mut t = ledger.traffic();
    if t.is_routed() {
        for v in 0..n as u64 {
            t.to_key(ledger.model(), v, 1);
        }
    } else {
        t.uniform(n as u64);
    }
    t
}

/// Rounds that move one record per edge, keyed by the edge.
pub(crate) fn charge_edges(
    ledger: &mut RoundLedger,
    kind: PassKind,
    g: &Graph,
    rounds: u32,
) -> Result<(), MpcError> {
    let mut t = ledger.traffic();
    if t.is_routed() {
        for e in g.edges() {
            t.to_key(ledger.model(), ((e.v as u64) << 32) | e.u as u64, 1);
        }
    } else {
        t.uniform(g.m() as u64);
    }
    ledger.charge_repeated(kind, rounds, &t)
}
