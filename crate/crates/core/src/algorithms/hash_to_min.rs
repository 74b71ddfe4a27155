use crate::contraction::PhaseLedgerEntry;
use crate::graph::{ComponentAssignment, Graph, VertexId};
use crate::mpc::{PassKind, RoundLedger};

use super::{AlgoConfig, AlgoError, PhaseDiagnostics, RunResult};

/// Cluster sets `C(v)` in CSR form, each list sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Clusters {
    offsets: Vec<usize>,
    members: Vec<VertexId>,
}

impl Clusters {
    fn closed_neighborhoods(g: &Graph) -> Self {
        let mut offsets = Vec::with_capacity(g.n() + 1);
        let mut members = Vec::with_capacity(g.n() + 2 * g.m());
        offsets.push(0);
        for v in g.vertices() {
            let adj = g.neighbors(v);
            let split = adj.partition_point(|&u| u < v);
            members.extend_from_slice(&adj[..split]);
            members.push(v);
            members.extend_from_slice(&adj[split..]);
            offsets.push(members.len());
        }
        Clusters { offsets, members }
    }

    fn get(&self, v: usize) -> &[VertexId] {
        &self.members[self.offsets[v]..self.offsets[v + 1]]
    }

    fn total(&self) -> u64 {
        self.members.len() as u64
    }

    /// One round: every `v` sends `C(v)` to `min C(v)` and `{min C(v)}` to
    /// each member; the new sets are the unions of what arrived.
    fn step(&self, n: usize) -> Self {
        let mut pairs: Vec<u64> = Vec::with_capacity(2 * self.members.len());
        for v in 0..n {
            let c = self.get(v);
            let Some(&m) = c.first() else { continue };
            for &x in c {
                pairs.push(((m as u64) << 32) | x as u64);
                pairs.push(((x as u64) << 32) | m as u64);
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        let mut offsets = vec![0usize; n + 1];
        for &p in &pairs {
            offsets[(p >> 32) as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let members = pairs.iter().map(|&p| p as VertexId).collect();
        Clusters { offsets, members }
    }
}

/// Hash-to-Min with the fixed vertex-id order. Stops at the first round
/// that changes no cluster set; each vertex is labelled with the minimum of
/// its final set. Phase entries are the rounds that changed something.
pub fn run_hash_to_min(g: &Graph, cfg: &AlgoConfig) -> Result<RunResult, AlgoError> {
    cfg.validate()?;
    let n = g.n();
    let max_rounds = cfg.max_phases_or(AlgoConfig::default_max_phases(n));
    let cap = cfg.message_cap_per_edge.saturating_mul(g.m() as u64);
    let mut ledger = RoundLedger::new(cfg.cost.clone());
    let mut phases: Vec<PhaseLedgerEntry> = Vec::new();
    let mut clusters = Clusters::closed_neighborhoods(g);

    if g.m() > 0 {
        loop {
            let next = clusters.step(n);
            let records = next.total();
            let mut traffic = ledger.traffic();
            if traffic.is_routed() {
                for v in 0..n {
                    let size = (next.offsets[v + 1] - next.offsets[v]) as u64;
                    traffic.to_key(ledger.model(), v as u64, size);
                }
            } else {
                traffic.uniform(records);
            }
            let before = ledger.totals();
            ledger
                .charge(PassKind::Propagate, &traffic)
                .map_err(|e| AlgoError::from(e).with_partial(&phases, &ledger))?;
            if records > cap {
                return Err(AlgoError::MessageCap {
                    round: phases.len(),
                    records,
                    cap,
                    partial: Box::default(),
                }
                .with_partial(&phases, &ledger));
            }
            if next == clusters {
                break;
            }
            if phases.len() >= max_rounds {
                return Err(AlgoError::MaxPhases {
                    limit: max_rounds,
                    partial: Box::default(),
                }
                .with_partial(&phases, &ledger));
            }
            let spent = ledger.totals().since(&before);
            phases.push(PhaseLedgerEntry {
                phase_index: phases.len(),
                nodes_in: n as u64,
                edges_in: clusters.total(),
                rounds_used: spent.rounds,
                messages_sent: spent.records,
                dht_puts: 0,
                dht_gets: 0,
            });
            clusters = next;
        }
    }

    let labels: Vec<VertexId> = (0..n).map(|v| clusters.get(v)[0]).collect();
    let assignment =
        ComponentAssignment::from_labels(labels).map_err(|e| AlgoError::Internal(e.to_string()))?;
    Ok(RunResult {
        assignment,
        diagnostics: vec![PhaseDiagnostics::default(); phases.len()],
        phases,
        ledger,
        converged: true,
        finalized_edges: None,
    })
}
