//! Per-phase orderings, merge-by-label contraction, isolated node pruning and
//! recovery of the input partition from a chain of phase mappings.

mod compose;
mod contract;
mod priority;

pub use compose::{compose_mappings, PrunedRecord};
pub use contract::{
    contract_by_labels, contract_weighted, prune_isolated, ContractionOutcome, LabelMap, Pruned,
};
pub use priority::{mix64, Priority, PriorityMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContractionError {
    #[error("vertex {vertex} has label {label}, which is not a vertex")]
    UnknownLabel { vertex: VertexId, label: VertexId },
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("inconsistent phase chain: {0}")]
    Inconsistent(String),
}

/// Ordering for phase `phase_index`. See [`PriorityMap`] for the hash.
pub fn sample_priorities(global_seed: u64, phase_index: u64, n: usize) -> PriorityMap {
    PriorityMap::sample(global_seed, phase_index, n)
}

/// Statistics of one phase (or one round, for round-based baselines).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseLedgerEntry {
    pub phase_index: usize,
    pub nodes_in: u64,
    pub edges_in: u64,
    pub rounds_used: u64,
    pub messages_sent: u64,
    pub dht_puts: u64,
    pub dht_gets: u64,
}
