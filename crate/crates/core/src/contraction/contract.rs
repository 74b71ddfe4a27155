use crate::graph::{EdgeBuilder, Graph, VertexId};

use super::ContractionError;

/// Vertex to representative vertex. Vertices sharing a label are merged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMap(Vec<VertexId>);

impl LabelMap {
    pub fn new(labels: Vec<VertexId>) -> Self {
        LabelMap(labels)
    }

    pub fn identity(n: usize) -> Self {
        LabelMap((0..n as VertexId).collect())
    }

    #[inline]
    pub fn get(&self, v: VertexId) -> VertexId {
        self.0[v as usize]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<VertexId> {
        self.0
    }
}

impl From<Vec<VertexId>> for LabelMap {
    fn from(v: Vec<VertexId>) -> Self {
        LabelMap(v)
    }
}

/// Result of merging label groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionOutcome {
    pub contracted: Graph,
    /// Old node to new node. New ids follow increasing label value.
    pub mapping: Vec<VertexId>,
    /// Old nodes per new node.
    pub cluster_size: Vec<u64>,
    /// Original vertices per new node.
    pub cluster_weight: Vec<u64>,
}

impl ContractionOutcome {
    /// Runs `self` then `next`, where `next` contracts `self.contracted`.
    /// Sizes count nodes of the graph `self` was computed from.
    pub fn then(self, next: ContractionOutcome) -> ContractionOutcome {
        let mapping = self
            .mapping
            .iter()
            .map(|&x| next.mapping[x as usize])
            .collect();
        let mut cluster_size = vec![0u64; next.contracted.n()];
        for (x, &s) in self.cluster_size.iter().enumerate() {
            cluster_size[next.mapping[x] as usize] += s;
        }
        ContractionOutcome {
            contracted: next.contracted,
            mapping,
            cluster_size,
            cluster_weight: next.cluster_weight,
        }
    }
}

/// Merges vertices with equal labels, every vertex weighing one.
pub fn contract_by_labels(g: &Graph, l: &LabelMap) -> Result<ContractionOutcome, ContractionError> {
    contract_weighted(g, l, None)
}

/// Merges vertices with equal labels; `weights[v]` counts the original
/// vertices inside `v` (all ones when `None`).
pub fn contract_weighted(
    g: &Graph,
    l: &LabelMap,
    weights: Option<&[u64]>,
) -> Result<ContractionOutcome, ContractionError> {
    let n = g.n();
    if l.len() != n {
        return Err(ContractionError::LengthMismatch {
            expected: n,
            got: l.len(),
        });
    }
    if let Some(w) = weights {
        if w.len() != n {
            return Err(ContractionError::LengthMismatch {
                expected: n,
                got: w.len(),
            });
        }
    }

    const UNSEEN: VertexId = VertexId::MAX;
    let mut new_id = vec![UNSEEN; n];
    for (v, &lab) in l.as_slice().iter().enumerate() {
        if lab as usize >= n {
            return Err(ContractionError::UnknownLabel {
                vertex: v as VertexId,
                label: lab,
            });
        }
        new_id[lab as usize] = 0;
    }
    let mut k: VertexId = 0;
    for slot in new_id.iter_mut() {
        if *slot != UNSEEN {
            *slot = k;
            k += 1;
        }
    }
    let k = k as usize;

    let mapping: Vec<VertexId> = l.as_slice().iter().map(|&lab| new_id[lab as usize]).collect();
    drop(new_id);

    let mut cluster_size = vec![0u64; k];
    let mut cluster_weight = vec![0u64; k];
    for (v, &x) in mapping.iter().enumerate() {
        cluster_size[x as usize] += 1;
        cluster_weight[x as usize] += weights.map_or(1, |w| w[v]);
    }

    // Visiting edges by larger endpoint matches the builder's key order, so
    // order-preserving mappings never trigger a re-sort.
    let mut b = EdgeBuilder::new(k);
    for v in g.vertices() {
        let mv = mapping[v as usize];
        for &u in g.neighbors(v).iter().take_while(|&&u| u < v) {
            b.push(mapping[u as usize], mv);
        }
    }

    Ok(ContractionOutcome {
        contracted: b.build(),
        mapping,
        cluster_size,
        cluster_weight,
    })
}

/// Graph after removing isolated nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pruned {
    pub graph: Graph,
    /// Node of the input to its new position: survivors take `[0, k)` in
    /// their original order, isolated nodes take `[k, n)`.
    pub renumber: Vec<VertexId>,
    /// Isolated input nodes, each a finished component.
    pub finalized: Vec<VertexId>,
}

impl Pruned {
    pub fn survivors(&self) -> usize {
        self.graph.n()
    }
}

pub fn prune_isolated(g: &Graph) -> Pruned {
    let n = g.n();
    let mut renumber = vec![0 as VertexId; n];
    let mut finalized = Vec::new();
    let mut k: VertexId = 0;
    for v in g.vertices() {
        if g.degree(v) > 0 {
            renumber[v as usize] = k;
            k += 1;
        } else {
            finalized.push(v);
        }
    }
    for (i, &v) in finalized.iter().enumerate() {
        renumber[v as usize] = k + i as VertexId;
    }
    let graph = if finalized.is_empty() {
        g.clone()
    } else {
        // Renumbering is monotone on survivors, so lists stay sorted.
        let mut offsets = Vec::with_capacity(k as usize + 1);
        let mut targets = Vec::with_capacity(2 * g.m());
        offsets.push(0);
        for v in g.vertices().filter(|&v| g.degree(v) > 0) {
            targets.extend(g.neighbors(v).iter().map(|&u| renumber[u as usize]));
            offsets.push(targets.len());
        }
        Graph::from_csr(offsets, targets)
    };
    Pruned {
        graph,
        renumber,
        finalized,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(u64, u64)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    #[test]
    fn identity_labels_keep_graph() {
        let g = graph(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        let o = contract_by_labels(&g, &LabelMap::identity(4)).unwrap();
        assert_eq!(o.contracted, g);
        assert_eq!(o.mapping, vec![0, 1, 2, 3]);
        assert_eq!(o.cluster_size, vec![1; 4]);
    }

    #[test]
    fn path_labels_give_three_node_path() {
        let g = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let o = contract_by_labels(&g, &LabelMap::new(vec![0, 0, 0, 1, 2])).unwrap();
        assert_eq!((o.contracted.n(), o.contracted.m()), (3, 2));
        assert_eq!(o.mapping, vec![0, 0, 0, 1, 2]);
        assert_eq!(o.cluster_size, vec![3, 1, 1]);
        assert!(o.contracted.has_edge(0, 1) && o.contracted.has_edge(1, 2));
    }

    #[test]
    fn triangle_collapses() {
        let g = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let o = contract_by_labels(&g, &LabelMap::new(vec![1, 1, 1])).unwrap();
        assert_eq!((o.contracted.n(), o.contracted.m()), (1, 0));
        assert_eq!(o.cluster_weight, vec![3]);
    }

    #[test]
    fn unknown_label_is_rejected() {
        let g = graph(2, &[(0, 1)]);
        let err = contract_by_labels(&g, &LabelMap::new(vec![0, 7])).unwrap_err();
        assert!(matches!(err, ContractionError::UnknownLabel { vertex: 1, label: 7 }));
        assert!(contract_by_labels(&g, &LabelMap::new(vec![0])).is_err());
    }

    #[test]
    fn weights_aggregate() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        let o = contract_weighted(&g, &LabelMap::new(vec![2, 2, 2]), Some(&[4, 5, 6])).unwrap();
        assert_eq!(o.cluster_weight, vec![15]);
        assert_eq!(o.cluster_size, vec![3]);
    }

    #[test]
    fn then_composes() {
        let g = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let a = contract_by_labels(&g, &LabelMap::new(vec![0, 0, 2, 3])).unwrap();
        let b = contract_weighted(
            &a.contracted,
            &LabelMap::new(vec![0, 0, 2]),
            Some(&a.cluster_weight),
        )
        .unwrap();
        let c = a.then(b);
        assert_eq!(c.mapping, vec![0, 0, 0, 1]);
        assert_eq!(c.cluster_size, vec![3, 1]);
        assert_eq!(c.cluster_weight, vec![3, 1]);
    }

    #[test]
    fn prune_all_isolated() {
        let p = prune_isolated(&Graph::empty(3));
        assert_eq!(p.survivors(), 0);
        assert_eq!(p.finalized, vec![0, 1, 2]);
        assert_eq!(p.renumber, vec![0, 1, 2]);
    }

    #[test]
    fn prune_path_plus_isolated() {
        let g = graph(4, &[(0, 2), (2, 3)]);
        let p = prune_isolated(&g);
        assert_eq!(p.finalized, vec![1]);
        assert_eq!(p.renumber, vec![0, 3, 1, 2]);
        assert_eq!((p.graph.n(), p.graph.m()), (3, 2));
        p.graph.check_invariants().unwrap();
        assert_eq!(p.graph.neighbors(1), &[0, 2]);
    }
}
