//! Logical MPC cost accounting: rounds, records shuffled per round, optional
//! per-machine receive budgets, and a distributed hash table with a round
//! barrier between writes and reads.
//!
//! Records are counted as delivered to reducers after combining. A reduce
//! key that aggregates with `min` receives one record, a set union receives
//! its distinct elements, and an edge pass moves one record per edge.

mod dht;

pub use dht::DhtHandle;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MpcError {
    #[error(
        "space violation in round {round} ({kind:?}): machine {machine} received {records} records, budget {budget}"
    )]
    SpaceViolation {
        round: u64,
        kind: PassKind,
        machine: usize,
        records: u64,
        budget: u64,
    },
    #[error("key {key} was written in the current round and is not yet visible")]
    Visibility { key: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PassKind {
    Label,
    Contract,
    LargeDetect,
    TwoHopSelect,
    PointerJump,
    DhtPut,
    DhtGet,
    Propagate,
    Rewire,
    Finalize,
}

/// Machine count, receive budget and the per-step round constants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CostModel {
    pub machines: usize,
    /// Records one machine may receive per round. `None` disables strict mode.
    pub per_machine_receive_budget: Option<u64>,
    pub record_size_bytes: u64,
    /// Rounds of the two-hop minimum label computation.
    pub label_rounds: u32,
    /// Rounds of merge-by-label contraction.
    pub contraction_rounds: u32,
    /// Rounds detecting large nodes in the merge-to-large step.
    pub mtl_detect_rounds: u32,
    /// Rounds selecting a large node in the two-hop neighborhood.
    pub mtl_select_rounds: u32,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            machines: 1,
            per_machine_receive_budget: None,
            record_size_bytes: 16,
            label_rounds: 2,
            contraction_rounds: 2,
            mtl_detect_rounds: 1,
            mtl_select_rounds: 2,
        }
    }
}

impl CostModel {
    /// Strict model with `machines` machines, each receiving at most
    /// `2 * ceil((n + m) / machines)` records per round.
    pub fn strict(machines: usize, n: usize, m: usize) -> Self {
        let machines = machines.max(1);
        let per = (n + m).div_ceil(machines) as u64;
        CostModel {
            machines,
            per_machine_receive_budget: Some(2 * per.max(1)),
            ..CostModel::default()
        }
    }

    pub fn is_strict(&self) -> bool {
        self.per_machine_receive_budget.is_some()
    }

    /// Fixed hash partitioning of reduce keys.
    #[inline]
    pub fn machine_of(&self, key: u64) -> usize {
        (crate::contraction::mix64(key ^ 0x6a09_e667_f3bc_c909) % self.machines as u64) as usize
    }
}

/// Records sent in one round, optionally routed to machines.
#[derive(Clone, Debug)]
pub struct Traffic {
    records: u64,
    loads: Option<Vec<u64>>,
}

impl Traffic {
    #[inline]
    pub fn records(&self) -> u64 {
        self.records
    }

    pub fn is_routed(&self) -> bool {
        self.loads.is_some()
    }

    /// `count` records for reduce key `key`.
    #[inline]
    pub fn to_key(&mut self, model: &CostModel, key: u64, count: u64) {
        self.records += count;
        if let Some(loads) = &mut self.loads {
            loads[model.machine_of(key)] += count;
        }
    }

    pub fn to_machine(&mut self, machine: usize, count: u64) {
        self.records += count;
        if let Some(loads) = &mut self.loads {
            let p = loads.len();
            loads[machine % p] += count;
        }
    }

    /// `count` records spread evenly over all machines.
    pub fn uniform(&mut self, count: u64) {
        self.records += count;
        if let Some(loads) = &mut self.loads {
            let p = loads.len() as u64;
            for (i, l) in loads.iter_mut().enumerate() {
                *l += count / p + u64::from((i as u64) < count % p);
            }
        }
    }

    fn max_load(&self) -> Option<(usize, u64)> {
        self.loads.as_ref().and_then(|loads| {
            loads
                .iter()
                .copied()
                .enumerate()
                .max_by_key(|&(i, l)| (l, std::cmp::Reverse(i)))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundEntry {
    pub round_index: u64,
    pub kind: PassKind,
    pub records_sent: u64,
    pub max_records_into_one_machine: Option<u64>,
    pub dht_puts: u64,
    pub dht_gets: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerTotals {
    pub rounds: u64,
    pub records: u64,
    pub dht_puts: u64,
    pub dht_gets: u64,
}

impl LedgerTotals {
    pub fn since(&self, earlier: &LedgerTotals) -> LedgerTotals {
        LedgerTotals {
            rounds: self.rounds - earlier.rounds,
            records: self.records - earlier.records,
            dht_puts: self.dht_puts - earlier.dht_puts,
            dht_gets: self.dht_gets - earlier.dht_gets,
        }
    }
}

/// Per-round cost log with running totals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundLedger {
    model: CostModel,
    entries: Vec<RoundEntry>,
    totals: LedgerTotals,
}

impl Default for RoundLedger {
    fn default() -> Self {
        RoundLedger::new(CostModel::default())
    }
}

impl RoundLedger {
    pub fn new(model: CostModel) -> Self {
        RoundLedger {
            model,
            entries: Vec::new(),
            totals: LedgerTotals::default(),
        }
    }

    pub fn model(&self) -> &CostModel {
        &self.model
    }

    pub fn entries(&self) -> &[RoundEntry] {
        &self.entries
    }

    pub fn totals(&self) -> LedgerTotals {
        self.totals
    }

    pub fn bytes_sent(&self) -> u64 {
        self.totals.records * self.model.record_size_bytes
    }

    /// Empty traffic for the next round; routed when strict mode is on.
    pub fn traffic(&self) -> Traffic {
        Traffic {
            records: 0,
            loads: self
                .model
                .is_strict()
                .then(|| vec![0; self.model.machines]),
        }
    }

    /// Appends a round that shuffles `records` records, uniformly keyed.
    pub fn charge_pass(&mut self, records: u64, kind: PassKind) -> Result<(), MpcError> {
        let mut t = self.traffic();
        t.uniform(records);
        self.charge(kind, &t)
    }

    /// Appends one round carrying `traffic`. In strict mode the round is
    /// still recorded when it violates the budget, and the error names it.
    pub fn charge(&mut self, kind: PassKind, traffic: &Traffic) -> Result<(), MpcError> {
        let round = self.entries.len() as u64;
        let max = traffic.max_load();
        self.push(RoundEntry {
            round_index: round,
            kind,
            records_sent: traffic.records,
            max_records_into_one_machine: max.map(|(_, l)| l),
            dht_puts: 0,
            dht_gets: 0,
        });
        if let (Some(budget), Some((machine, records))) =
            (self.model.per_machine_receive_budget, max)
        {
            if records > budget {
                return Err(MpcError::SpaceViolation {
                    round,
                    kind,
                    machine,
                    records,
                    budget,
                });
            }
        }
        Ok(())
    }

    /// Appends `rounds` identical rounds.
    pub fn charge_repeated(
        &mut self,
        kind: PassKind,
        rounds: u32,
        traffic: &Traffic,
    ) -> Result<(), MpcError> {
        for _ in 0..rounds {
            self.charge(kind, traffic)?;
        }
        Ok(())
    }

    /// Appends a round of hash table traffic (no shuffle).
    pub fn charge_dht(&mut self, kind: PassKind, puts: u64, gets: u64) {
        let round = self.entries.len() as u64;
        self.push(RoundEntry {
            round_index: round,
            kind,
            records_sent: 0,
            max_records_into_one_machine: None,
            dht_puts: puts,
            dht_gets: gets,
        });
    }

    fn push(&mut self, e: RoundEntry) {
        self.totals.rounds += 1;
        self.totals.records += e.records_sent;
        self.totals.dht_puts += e.dht_puts;
        self.totals.dht_gets += e.dht_gets;
        self.entries.push(e);
    }
}
