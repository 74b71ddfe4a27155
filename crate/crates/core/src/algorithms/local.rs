use std::cmp::Reverse;
use std::iter::once;

use crate::contraction::{contract_weighted, ContractionOutcome, LabelMap, PriorityMap};
use crate::graph::{Graph, VertexId};
use crate::mpc::PassKind;

use super::driver::{drive, StepOutput};
use super::{charge_edges, charge_vertices, AlgoConfig, AlgoError, PhaseDiagnostics, RunResult};

/// `l(v)` = the minimum-priority vertex of `N(N(v))`, closed neighborhoods.
/// Computed as two rounds of neighborhood minima.
pub fn local_contraction_labels(g: &Graph, rho: &PriorityMap) -> LabelMap {
    let h = rho.hashes();
    let key = |x: &VertexId| (h[*x as usize], *x);
    let closed_min = |v: VertexId, of: &dyn Fn(VertexId) -> VertexId| {
        once(v)
            .chain(g.neighbors(v).iter().copied())
            .map(of)
            .min_by_key(key)
            .expect("closed neighborhood is never empty")
    };
    let m1: Vec<VertexId> = g.vertices().map(|v| closed_min(v, &|u| u)).collect();
    let labels = g
        .vertices()
        .map(|v| closed_min(v, &|u| m1[u as usize]))
        .collect();
    LabelMap::new(labels)
}

/// Large-node thresholds across phases, in original vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaSchedule {
    alpha: u64,
    growth: f64,
}

impl AlphaSchedule {
    /// Starts at `alpha0`, or `max(2, ceil(4 ln n))` when absent.
    pub fn new(n: usize, alpha0: Option<u64>, growth: f64) -> Self {
        let default = (4.0 * (n.max(1) as f64).ln()).ceil() as u64;
        AlphaSchedule {
            alpha: alpha0.unwrap_or(default).max(2),
            growth,
        }
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    /// Threshold handed to the merge step: `max(2, ceil(alpha / 4))`.
    pub fn threshold(&self) -> u64 {
        self.alpha.div_ceil(4).max(2)
    }

    /// `alpha <- min(ceil(alpha^growth), max(2, ceil(n^(1/3))))` for the
    /// next graph with `n` nodes.
    pub fn advance(&mut self, n: usize) {
        let grown = (self.alpha as f64).powf(self.growth).ceil();
        let cap = ((n as f64).cbrt().ceil() as u64).max(2);
        self.alpha = if grown >= cap as f64 { cap } else { grown as u64 };
    }
}

/// Merge step on the outcome of a contraction. A node is large when its
/// weight is at least `alpha`; its priority is the `alpha`-th largest
/// `rho_prev` hash among the nodes it absorbed (all of them when it absorbed
/// fewer).
pub fn merge_to_large_labels(
    o: &ContractionOutcome,
    rho_prev: &PriorityMap,
    alpha: u64,
) -> Result<LabelMap, AlgoError> {
    if alpha < 2 {
        return Err(AlgoError::Config(format!("alpha must be at least 2, got {alpha}")));
    }
    let k = o.contracted.n();
    let is_large = |x: VertexId| o.cluster_weight[x as usize] >= alpha;
    let mut members: Vec<(VertexId, u64)> = o
        .mapping
        .iter()
        .enumerate()
        .filter(|&(_, &x)| is_large(x))
        .map(|(v, &x)| (x, rho_prev.hash(v as VertexId)))
        .collect();
    members.sort_unstable_by_key(|&(x, h)| (x, Reverse(h)));

    let mut priority = vec![0u64; k];
    for group in members.chunk_by(|a, b| a.0 == b.0) {
        let idx = (alpha as usize).min(group.len()) - 1;
        priority[group[0].0 as usize] = group[idx].1;
    }
    Ok(merge_to_large_select(
        &o.contracted,
        &o.cluster_weight,
        alpha,
        &priority,
    ))
}

/// Labels every node with the highest-priority large node within two hops,
/// itself included; ties go to the smaller id. Nodes without a large node
/// nearby keep their own id.
pub fn merge_to_large_select(
    g: &Graph,
    weights: &[u64],
    alpha: u64,
    priority: &[u64],
) -> LabelMap {
    let rank = |x: VertexId| (priority[x as usize], Reverse(x));
    let best = |v: VertexId, of: &dyn Fn(VertexId) -> Option<VertexId>| {
        once(v)
            .chain(g.neighbors(v).iter().copied())
            .filter_map(of)
            .max_by_key(|&x| rank(x))
    };
    let best1: Vec<Option<VertexId>> = g
        .vertices()
        .map(|v| best(v, &|u| (weights[u as usize] >= alpha).then_some(u)))
        .collect();
    let labels = g
        .vertices()
        .map(|v| best(v, &|u| best1[u as usize]).unwrap_or(v))
        .collect();
    LabelMap::new(labels)
}

/// LocalContraction, with the merge-to-large step when enabled in `cfg`.
pub fn run_local_contraction(g: &Graph, cfg: &AlgoConfig) -> Result<RunResult, AlgoError> {
    let mut schedule = AlphaSchedule::new(g.n(), cfg.alpha0, cfg.alpha_growth);
    let max_phases = cfg.max_phases_or(AlgoConfig::default_max_phases(g.n()));
    let costs = cfg.cost.clone();
    drive(g, cfg, max_phases, |input, ledger| {
        let graph = input.graph;
        let labels = local_contraction_labels(graph, input.rho);
        charge_vertices(ledger, PassKind::Label, graph.n(), costs.label_rounds)?;
        let mut outcome = contract_weighted(graph, &labels, Some(input.weights))?;
        charge_edges(ledger, PassKind::Contract, graph, costs.contraction_rounds)?;

        let mut diag = PhaseDiagnostics::default();
        if cfg.merge_to_large_enabled {
            if input.index > 0 {
                schedule.advance(graph.n());
            }
            let threshold = schedule.threshold();
            let merge = merge_to_large_labels(&outcome, input.rho, threshold)?;
            let k = outcome.contracted.n();
            charge_vertices(ledger, PassKind::LargeDetect, k, costs.mtl_detect_rounds)?;
            charge_vertices(ledger, PassKind::TwoHopSelect, k, costs.mtl_select_rounds)?;
            let second =
                contract_weighted(&outcome.contracted, &merge, Some(&outcome.cluster_weight))?;
            charge_edges(
                ledger,
                PassKind::Contract,
                &outcome.contracted,
                costs.contraction_rounds,
            )?;
            diag.alpha = Some(schedule.alpha());
            diag.large_nodes = Some(
                outcome
                    .cluster_weight
                    .iter()
                    .filter(|&&w| w >= threshold)
                    .count() as u64,
            );
            outcome = outcome.then(second);
        }
        Ok(StepOutput { outcome, diag })
    })
}
