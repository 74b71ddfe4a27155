use crate::contraction::{contract_weighted, LabelMap, PriorityMap};
use crate::graph::{Graph, VertexId};
use crate::mpc::{DhtHandle, PassKind};

use super::driver::{drive, StepOutput};
use super::{charge_edges, charge_vertices, AlgoConfig, AlgoError, PhaseDiagnostics, RunResult};

const NONE: VertexId = VertexId::MAX;

/// `f(v)` = lowest-priority proper neighbor of `v`; undefined on isolated
/// vertices. Every trajectory of `f` ends in a 2-cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalGraph {
    f: Vec<VertexId>,
}

impl FunctionalGraph {
    /// `None` entries mark isolated vertices.
    pub fn from_parents(parents: &[Option<VertexId>]) -> Self {
        FunctionalGraph {
            f: parents.iter().map(|p| p.unwrap_or(NONE)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    #[inline]
    pub fn get(&self, v: VertexId) -> Option<VertexId> {
        let x = self.f[v as usize];
        (x != NONE).then_some(x)
    }

    /// Iterates `f` from `v` until `x_{i+2} = x_i`. Returns `(d, x_d,
    /// x_{d+1})`, or `None` for isolated vertices and for trajectories that
    /// do not settle within `len()` steps.
    pub fn chase(&self, v: VertexId) -> Option<(u64, VertexId, VertexId)> {
        let mut a = v;
        let mut b = self.get(a)?;
        for d in 0..=self.len() as u64 {
            let c = self.get(b)?;
            if c == a {
                return Some((d, a, b));
            }
            a = b;
            b = c;
        }
        None
    }
}

pub fn tree_functional_graph(g: &Graph, rho: &PriorityMap) -> FunctionalGraph {
    let h = rho.hashes();
    let f = g
        .vertices()
        .map(|v| {
            g.neighbors(v)
                .iter()
                .copied()
                .min_by_key(|&u| (h[u as usize], u))
                .unwrap_or(NONE)
        })
        .collect();
    FunctionalGraph { f }
}

#[inline]
fn pair_label(rho: &PriorityMap, a: VertexId, b: VertexId) -> VertexId {
    if rho.precedes(a, b) {
        a
    } else {
        b
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointerJumpReport {
    pub labels: LabelMap,
    /// Squarings performed, the last one confirming stability.
    pub iterations: u32,
}

/// Weakly connected components of `f` by repeated squaring. Each vertex is
/// labelled with the lower-priority member of the 2-cycle it drains into.
pub fn functional_wcc_pointer_jumping(f: &FunctionalGraph, rho: &PriorityMap) -> PointerJumpReport {
    let n = f.len();
    let mut g: Vec<VertexId> = (0..n as VertexId)
        .map(|v| f.get(v).unwrap_or(v))
        .collect();
    let mut iterations = 0;
    if n > 0 {
        loop {
            let next: Vec<VertexId> = g.iter().map(|&x| g[x as usize]).collect();
            iterations += 1;
            if next == g {
                break;
            }
            g = next;
        }
    }
    let labels = (0..n as VertexId)
        .map(|v| {
            let x = g[v as usize];
            match f.get(x) {
                Some(y) => pair_label(rho, x, y),
                None => v,
            }
        })
        .collect();
    PointerJumpReport {
        labels: LabelMap::new(labels),
        iterations,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChaseReport {
    pub labels: LabelMap,
    /// `d(v)` per vertex; zero for isolated vertices.
    pub depths: Vec<u64>,
    pub puts: u64,
    pub gets: u64,
}

impl ChaseReport {
    pub fn max_depth(&self) -> u64 {
        self.depths.iter().copied().max().unwrap_or(0)
    }
}

/// Weakly connected components of `f` through a hash table: `f` is written
/// in one round, then every vertex follows its trajectory with one get per
/// step until it sees a 2-cycle.
pub fn functional_wcc_dht(
    f: &FunctionalGraph,
    rho: &PriorityMap,
    dht: &mut DhtHandle,
) -> Result<ChaseReport, AlgoError> {
    let n = f.len();
    let puts = dht.put_batch(
        (0..n as VertexId).filter_map(|v| f.get(v).map(|x| (v as u64, x as u64))),
    ) as u64;
    dht.advance_round();

    let mut labels = Vec::with_capacity(n);
    let mut depths = Vec::with_capacity(n);
    let mut lookup = |x: VertexId| -> Result<VertexId, AlgoError> {
        dht.get(x as u64)?
            .map(|y| y as VertexId)
            .ok_or_else(|| AlgoError::Internal(format!("vertex {x} missing from the table")))
    };
    for v in 0..n as VertexId {
        if f.get(v).is_none() {
            labels.push(v);
            depths.push(0);
            continue;
        }
        let mut a = v;
        let mut b = lookup(a)?;
        let mut d = 0u64;
        loop {
            let c = lookup(b)?;
            if c == a {
                break;
            }
            a = b;
            b = c;
            d += 1;
            if d > n as u64 {
                return Err(AlgoError::Internal(format!(
                    "trajectory of vertex {v} did not reach a 2-cycle within {n} steps"
                )));
            }
        }
        labels.push(pair_label(rho, a, b));
        depths.push(d);
    }
    let gets = dht.gets_this_round();
    Ok(ChaseReport {
        labels: LabelMap::new(labels),
        depths,
        puts,
        gets,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeVariant {
    PointerJumping,
    Dht,
}

pub fn run_tree_contraction(
    g: &Graph,
    cfg: &AlgoConfig,
    variant: TreeVariant,
) -> Result<RunResult, AlgoError> {
    let max_phases = cfg.max_phases_or(AlgoConfig::default_max_phases(g.n()));
    let costs = cfg.cost.clone();
    drive(g, cfg, max_phases, |input, ledger| {
        let graph = input.graph;
        let n = graph.n();
        let f = tree_functional_graph(graph, input.rho);
        charge_vertices(ledger, PassKind::Label, n, 1)?;
        let mut diag = PhaseDiagnostics::default();
        let labels = match variant {
            TreeVariant::PointerJumping => {
                let rep = functional_wcc_pointer_jumping(&f, input.rho);
                charge_vertices(ledger, PassKind::PointerJump, n, rep.iterations)?;
                diag.pj_iterations = Some(rep.iterations);
                diag.max_chase_depth = Some(
                    graph
                        .vertices()
                        .filter_map(|v| f.chase(v).map(|c| c.0))
                        .max()
                        .unwrap_or(0),
                );
                rep.labels
            }
            TreeVariant::Dht => {
                let mut dht = DhtHandle::with_capacity(n);
                let rep = functional_wcc_dht(&f, input.rho, &mut dht)?;
                ledger.charge_dht(PassKind::DhtPut, rep.puts, 0);
                ledger.charge_dht(PassKind::DhtGet, 0, rep.gets);
                diag.max_chase_depth = Some(rep.max_depth());
                rep.labels
            }
        };
        let outcome = contract_weighted(graph, &labels, Some(input.weights))?;
        charge_edges(ledger, PassKind::Contract, graph, costs.contraction_rounds)?;
        Ok(StepOutput { outcome, diag })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::PrioritySource;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n as u64).map(|i| (i - 1, i))).unwrap()
    }

    fn parents(f: &FunctionalGraph) -> Vec<Option<VertexId>> {
        (0..f.len() as VertexId).map(|v| f.get(v)).collect()
    }

    #[test]
    fn single_edge() {
        let g = path(2);
        let rho = PriorityMap::identity(2);
        let f = tree_functional_graph(&g, &rho);
        assert_eq!(parents(&f), vec![Some(1), Some(0)]);
        assert_eq!(functional_wcc_pointer_jumping(&f, &rho).labels.as_slice(), &[0, 0]);
    }

    #[test]
    fn four_path_identity() {
        let f = tree_functional_graph(&path(4), &PriorityMap::identity(4));
        assert_eq!(parents(&f), vec![Some(1), Some(0), Some(1), Some(2)]);
    }

    #[test]
    fn six_path_two_pieces() {
        let rho = PriorityMap::from_hashes(vec![1, 2, 3, 6, 5, 4]);
        let f = tree_functional_graph(&path(6), &rho);
        assert_eq!(
            parents(&f),
            vec![Some(1), Some(0), Some(1), Some(2), Some(5), Some(4)]
        );
        let pj = functional_wcc_pointer_jumping(&f, &rho);
        assert_eq!(pj.labels.as_slice(), &[0, 0, 0, 0, 5, 5]);
        let dht = functional_wcc_dht(&f, &rho, &mut DhtHandle::new()).unwrap();
        assert_eq!(dht.labels, pj.labels);
        assert_eq!(dht.depths, vec![0, 0, 1, 2, 0, 0]);
        assert_eq!(dht.puts, 6);
        // d(v) + 2 gets per vertex.
        assert_eq!(dht.gets, 2 * 6 + 3);
    }

    #[test]
    fn perfect_matching_chases_are_short() {
        let g = Graph::from_edges(8, (0..4u64).map(|i| (2 * i, 2 * i + 1))).unwrap();
        let rho = PriorityMap::sample(5, 0, 8);
        let f = tree_functional_graph(&g, &rho);
        let rep = functional_wcc_dht(&f, &rho, &mut DhtHandle::new()).unwrap();
        assert!(rep.depths.iter().all(|&d| d == 0));
        assert_eq!(rep.gets, 16);
    }

    #[test]
    fn cycle_in_f_is_reported() {
        // Not a valid tree function: a 3-cycle never settles.
        let f = FunctionalGraph::from_parents(&[Some(1), Some(2), Some(0)]);
        let rho = PriorityMap::identity(3);
        assert!(f.chase(0).is_none());
        assert!(matches!(
            functional_wcc_dht(&f, &rho, &mut DhtHandle::new()),
            Err(AlgoError::Internal(_))
        ));
    }

    #[test]
    fn isolated_vertices_keep_their_id() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let rho = PriorityMap::identity(3);
        let f = tree_functional_graph(&g, &rho);
        assert_eq!(f.get(2), None);
        assert_eq!(functional_wcc_pointer_jumping(&f, &rho).labels.get(2), 2);
        let rep = functional_wcc_dht(&f, &rho, &mut DhtHandle::new()).unwrap();
        assert_eq!(rep.labels.get(2), 2);
    }

    #[test]
    fn run_single_edge_and_path() {
        let cfg = AlgoConfig {
            priority: PrioritySource::Identity,
            finalize_threshold: 0,
            ..AlgoConfig::default()
        };
        for variant in [TreeVariant::PointerJumping, TreeVariant::Dht] {
            let r = run_tree_contraction(&path(2), &cfg, variant).unwrap();
            assert_eq!(r.phase_count(), 1);
            let r = run_tree_contraction(&path(5), &cfg, variant).unwrap();
            assert_eq!(r.phase_count(), 1);
            assert_eq!(r.assignment.labels(), &[0; 5]);
        }
    }

    #[test]
    fn dht_variant_meters_table_traffic() {
        let cfg = AlgoConfig {
            finalize_threshold: 0,
            ..AlgoConfig::with_seed(11)
        };
        let r = run_tree_contraction(&path(64), &cfg, TreeVariant::Dht).unwrap();
        let t = r.ledger.totals();
        assert!(t.dht_puts >= 64);
        assert!(t.dht_gets >= 2 * 64);
    }
}
