use std::borrow::Cow;

use crate::contraction::{
    compose_mappings, prune_isolated, ContractionOutcome, PhaseLedgerEntry, PriorityMap,
    PrunedRecord,
};
use crate::graph::{union_find_components, ComponentAssignment, Graph, VertexId};
use crate::mpc::{PassKind, RoundLedger};

use super::{AlgoConfig, AlgoError, OrderingMode, PhaseDiagnostics, PrioritySource, RunResult};

pub(crate) struct PhaseInput<'a> {
    pub index: usize,
    pub graph: &'a Graph,
    /// Original vertices per node.
    pub weights: &'a [u64],
    pub rho: &'a PriorityMap,
}

pub(crate) struct StepOutput {
    pub outcome: ContractionOutcome,
    pub diag: PhaseDiagnostics,
}

/// Solves `g` on one machine with union-find. Charges one round that ships
/// every edge to machine 0.
pub fn finalize_small_graph(
    g: &Graph,
    threshold: u64,
    ledger: &mut RoundLedger,
) -> Result<ComponentAssignment, AlgoError> {
    let m = g.m() as u64;
    if m > threshold {
        return Err(AlgoError::FinalizeRefused { m, threshold });
    }
    let mut t = ledger.traffic();
    t.to_machine(0, m);
    ledger.charge(PassKind::Finalize, &t)?;
    union_find_components(g.edges(), g.n()).map_err(|e| AlgoError::Internal(e.to_string()))
}

fn phase_priorities(cfg: &AlgoConfig, index: usize, n: usize, carried: Option<&[u64]>) -> PriorityMap {
    match (cfg.priority, carried) {
        (PrioritySource::Identity, _) => PriorityMap::identity(n),
        (PrioritySource::Hashed, Some(c)) => PriorityMap::from_hashes(c.to_vec()),
        (PrioritySource::Hashed, None) => PriorityMap::sample(cfg.global_seed, index as u64, n),
    }
}

/// Runs contraction phases until no edges remain (or the graph is small
/// enough to finalize), then recovers the input partition.
pub(crate) fn drive<F>(
    g: &Graph,
    cfg: &AlgoConfig,
    max_phases: usize,
    mut step: F,
) -> Result<RunResult, AlgoError>
where
    F: FnMut(&PhaseInput<'_>, &mut RoundLedger) -> Result<StepOutput, AlgoError>,
{
    cfg.validate()?;
    let n0 = g.n();
    let mut ledger = RoundLedger::new(cfg.cost.clone());
    let mut phases: Vec<PhaseLedgerEntry> = Vec::new();
    let mut diagnostics = Vec::new();
    let mut chain: Vec<Vec<VertexId>> = Vec::new();
    let mut pruned: Vec<PrunedRecord> = Vec::new();
    let mut finalized_edges = None;

    let p0 = prune_isolated(g);
    pruned.extend(p0.finalized.iter().map(|&node| PrunedRecord { level: 0, node }));
    let mut cur: Cow<'_, Graph> = if p0.finalized.is_empty() {
        Cow::Borrowed(g)
    } else {
        Cow::Owned(p0.graph)
    };
    chain.push(p0.renumber);

    let mut weights = vec![1u64; cur.n()];
    let reuse = cfg.ordering == OrderingMode::Reuse && cfg.priority == PrioritySource::Hashed;
    let mut carried: Option<Vec<u64>> =
        reuse.then(|| PriorityMap::sample(cfg.global_seed, 0, cur.n()).hashes());

    loop {
        let m = cur.m();
        if m == 0 {
            break;
        }
        if cfg.finalize_threshold > 0 && m as u64 <= cfg.finalize_threshold {
            let a = finalize_small_graph(&cur, cfg.finalize_threshold, &mut ledger)
                .map_err(|e| e.with_partial(&phases, &ledger))?;
            chain.push(a.labels().to_vec());
            finalized_edges = Some(m as u64);
            break;
        }
        if phases.len() >= max_phases {
            return Err(AlgoError::MaxPhases {
                limit: max_phases,
                partial: Box::default(),
            }
            .with_partial(&phases, &ledger));
        }

        let index = phases.len();
        let rho = phase_priorities(cfg, index, cur.n(), carried.as_deref());
        let before = ledger.totals();
        let input = PhaseInput {
            index,
            graph: &cur,
            weights: &weights,
            rho: &rho,
        };
        let StepOutput { outcome, mut diag } =
            step(&input, &mut ledger).map_err(|e| e.with_partial(&phases, &ledger))?;
        let spent = ledger.totals().since(&before);
        phases.push(PhaseLedgerEntry {
            phase_index: index,
            nodes_in: cur.n() as u64,
            edges_in: m as u64,
            rounds_used: spent.rounds,
            messages_sent: spent.records,
            dht_puts: spent.dht_puts,
            dht_gets: spent.dht_gets,
        });

        let p = prune_isolated(&outcome.contracted);
        chain.push(
            outcome
                .mapping
                .iter()
                .map(|&x| p.renumber[x as usize])
                .collect(),
        );
        // Finalized nodes belong to the graph the new chain entry maps into.
        let level = chain.len();
        pruned.extend(p.finalized.iter().map(|&x| PrunedRecord {
            level,
            node: p.renumber[x as usize],
        }));

        let k = p.survivors();
        let mut next_weights = vec![0u64; k];
        for (x, &w) in outcome.cluster_weight.iter().enumerate() {
            let y = p.renumber[x] as usize;
            if y < k {
                next_weights[y] = w;
            }
        }
        if let Some(c) = &carried {
            let mut next = vec![u64::MAX; k];
            for (v, &x) in outcome.mapping.iter().enumerate() {
                let y = p.renumber[x as usize] as usize;
                if y < k {
                    next[y] = next[y].min(c[v]);
                }
            }
            carried = Some(next);
        }

        diag.nodes_out = outcome.contracted.n() as u64;
        diag.edges_out = outcome.contracted.m() as u64;
        diag.survivors = k as u64;
        diagnostics.push(diag);

        weights = next_weights;
        cur = Cow::Owned(p.graph);
    }

    let assignment = compose_mappings(n0, &chain, &pruned)?;
    Ok(RunResult {
        assignment,
        phases,
        diagnostics,
        ledger,
        converged: true,
        finalized_edges,
    })
}
