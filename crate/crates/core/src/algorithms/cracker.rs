use std::iter::once;

use crate::contraction::{contract_weighted, LabelMap, PriorityMap};
use crate::graph::{EdgeBuilder, Graph, VertexId};
use crate::mpc::PassKind;

use super::driver::{drive, StepOutput};
use super::{charge_edges, charge_vertices, AlgoConfig, AlgoError, PhaseDiagnostics, RunResult};

fn closed_argmin(g: &Graph, h: &[u64], v: VertexId) -> VertexId {
    once(v)
        .chain(g.neighbors(v).iter().copied())
        .min_by_key(|&u| (h[u as usize], u))
        .expect("closed neighborhood is never empty")
}

/// Edges `(m(v), u)` for every `v` and `u` in `N(v)`, where `m(v)` is the
/// minimum-priority vertex of the closed neighborhood `N(v)`.
pub fn cracker_rewire(g: &Graph, rho: &PriorityMap) -> Graph {
    let h = rho.hashes();
    let mut b = EdgeBuilder::with_capacity(g.n(), g.n() + 2 * g.m());
    for v in g.vertices() {
        let m = closed_argmin(g, &h, v);
        b.push(m, v);
        for &u in g.neighbors(v) {
            b.push(m, u);
        }
    }
    b.build()
}

/// Cracker as edge rewiring followed by minimum-label merging on the
/// rewired graph.
pub fn run_cracker(g: &Graph, cfg: &AlgoConfig) -> Result<RunResult, AlgoError> {
    let max_phases = cfg.max_phases_or(AlgoConfig::default_max_phases(g.n()));
    let costs = cfg.cost.clone();
    drive(g, cfg, max_phases, |input, ledger| {
        let rewired = cracker_rewire(input.graph, input.rho);
        charge_edges(ledger, PassKind::Rewire, &rewired, 1)?;
        let h = input.rho.hashes();
        let labels = LabelMap::new(
            rewired
                .vertices()
                .map(|v| closed_argmin(&rewired, &h, v))
                .collect(),
        );
        charge_vertices(ledger, PassKind::Label, rewired.n(), 1)?;
        let outcome = contract_weighted(&rewired, &labels, Some(input.weights))?;
        charge_edges(ledger, PassKind::Contract, &rewired, costs.contraction_rounds)?;
        Ok(StepOutput {
            outcome,
            diag: PhaseDiagnostics::default(),
        })
    })
}
