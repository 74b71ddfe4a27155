use crate::contraction::PhaseLedgerEntry;
use crate::graph::{ComponentAssignment, Graph, VertexId};
use std::collections::VecDeque;

use crate::mpc::{PassKind, RoundLedger};

use super::{vertex_traffic, AlgoConfig, AlgoError, PhaseDiagnostics, RunResult};

/// Minimum-label flooding. Labels start as vertex ids (dense order equals
/// external order) and each round every vertex takes the minimum over its
/// closed neighborhood. One phase entry per round that changed a label; the
/// ledger also holds the final round that detected the fixpoint.
///
/// Every round moves the same `n` vertex-keyed records, so the run is fixed
/// by its round count: after `r` rounds `v` holds the minimum of its radius-r
/// ball, which reaches the component minimum `c` at `r = dist(v, c)`. The
/// simulation runs one BFS from each component minimum instead of flooding.
pub fn run_hash_min(g: &Graph, cfg: &AlgoConfig) -> Result<RunResult, AlgoError> {
    cfg.validate()?;
    let n = g.n();
    let max_rounds = cfg.max_phases_or(n + 1);

    const UNSEEN: VertexId = VertexId::MAX;
    let mut label = vec![UNSEEN; n];
    let mut queue = VecDeque::new();
    let mut productive = 0usize;
    for s in g.vertices() {
        if label[s as usize] != UNSEEN {
            continue;
        }
        label[s as usize] = s;
        queue.push_back((s, 0usize));
        while let Some((v, d)) = queue.pop_front() {
            productive = productive.max(d);
            for &u in g.neighbors(v) {
                if label[u as usize] == UNSEEN {
                    label[u as usize] = s;
                    queue.push_back((u, d + 1));
                }
            }
        }
    }

    let mut ledger = RoundLedger::new(cfg.cost.clone());
    let mut phases = Vec::new();
    if g.m() > 0 {
        let traffic = vertex_traffic(&ledger, n);
        loop {
            let before = ledger.totals();
            ledger
                .charge(PassKind::Propagate, &traffic)
                .map_err(|e| AlgoError::from(e).with_partial(&phases, &ledger))?;
            if phases.len() == productive {
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
                edges_in: g.m() as u64,
                rounds_used: spent.rounds,
                messages_sent: spent.records,
                dht_puts: 0,
                dht_gets: 0,
            });
        }
    }

    let assignment = ComponentAssignment::from_labels(label)
        .map_err(|e| AlgoError::Internal(e.to_string()))?;
    Ok(RunResult {
        assignment,
        diagnostics: vec![PhaseDiagnostics::default(); phases.len()],
        phases,
        ledger,
        converged: true,
        finalized_edges: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpc::CostModel;
    use proptest::prelude::*;

    /// Round-by-round flooding: (labels, productive rounds).
    fn flood(g: &Graph) -> (Vec<VertexId>, usize) {
        let mut label: Vec<VertexId> = g.vertices().collect();
        let mut rounds = 0;
        loop {
            let next: Vec<VertexId> = g
                .vertices()
                .map(|v| {
                    g.neighbors(v)
                        .iter()
                        .map(|&u| label[u as usize])
                        .fold(label[v as usize], VertexId::min)
                })
                .collect();
            if next == label {
                return (label, rounds);
            }
            label = next;
            rounds += 1;
        }
    }

    proptest! {
        #[test]
        fn matches_flooding(n in 1usize..40, raw in prop::collection::vec((0u64..40, 0u64..40), 0..80)) {
            let edges: Vec<_> = raw.into_iter().map(|(a, b)| (a % n as u64, b % n as u64)).collect();
            let g = Graph::from_edges(n, edges).unwrap();
            let (labels, rounds) = flood(&g);
            let r = run_hash_min(&g, &AlgoConfig::default()).unwrap();
            prop_assert_eq!(r.assignment.labels(), labels.as_slice());
            prop_assert_eq!(r.phase_count(), rounds);
            let detect = u64::from(g.m() > 0);
            prop_assert_eq!(r.rounds(), rounds as u64 + detect);
            prop_assert_eq!(r.records(), (rounds as u64 + detect) * n as u64);
        }
    }

    #[test]
    fn strict_mode_routes_by_vertex() {
        let g = Graph::from_edges(6, (1..6).map(|i| (i - 1, i))).unwrap();
        let cfg = AlgoConfig {
            cost: CostModel::strict(2, g.n(), g.m()),
            ..AlgoConfig::default()
        };
        let r = run_hash_min(&g, &cfg).unwrap();
        assert!(r.ledger.entries().iter().all(|e| e.max_records_into_one_machine.is_some()));
    }

    #[test]
    fn star_takes_one_round() {
        let g = Graph::from_edges(7, (1..7).map(|i| (0, i))).unwrap();
        let r = run_hash_min(&g, &AlgoConfig::default()).unwrap();
        assert_eq!(r.phase_count(), 1);
        assert_eq!(r.assignment.labels(), &[0; 7]);
    }

    #[test]
    fn path_of_length_nine() {
        let g = Graph::from_edges(10, (1..10).map(|i| (i - 1, i))).unwrap();
        let r = run_hash_min(&g, &AlgoConfig::default()).unwrap();
        assert_eq!(r.phase_count(), 9);
        assert_eq!(r.rounds(), 10);
    }

    #[test]
    fn round_cap_aborts() {
        let g = Graph::from_edges(10, (1..10).map(|i| (i - 1, i))).unwrap();
        let cfg = AlgoConfig {
            max_phases: Some(3),
            ..AlgoConfig::default()
        };
        let err = run_hash_min(&g, &cfg).unwrap_err();
        assert!(err.is_abort());
        assert_eq!(err.partial().unwrap().phases.len(), 3);
    }
}
