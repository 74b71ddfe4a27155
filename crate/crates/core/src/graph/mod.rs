//! Undirected simple graphs over dense vertex ids, component assignments and
//! the sequential union-find oracle.
//!
//! Every graph handed to an algorithm is normalized: ids are dense in
//! `[0, n)`, there are no self-loops or parallel edges, and adjacency lists
//! are sorted and symmetric. Graphs are immutable once built.

mod io;
mod union_find;

pub use io::{
    load_edge_list, read_assignment_tsv, write_assignment_tsv, write_edge_list, IdTable,
};
pub use union_find::{union_find_components, UnionFind};

use std::collections::HashMap;
use std::hash::Hash;

use thiserror::Error;

/// Dense vertex id. Graphs are limited to `u32::MAX` vertices.
pub type VertexId = u32;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("vertex {id} out of range for graph with {n} vertices")]
    OutOfRange { id: u64, n: usize },
    #[error("too many vertices: {0}")]
    TooManyVertices(usize),
    #[error("assignments cover different vertex universes ({left} vs {right})")]
    UniverseMismatch { left: usize, right: usize },
    #[error("label map is not idempotent at vertex {vertex}")]
    NotIdempotent { vertex: VertexId },
    #[error("graph invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// An undirected edge stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeRecord {
    pub u: VertexId,
    pub v: VertexId,
}

impl EdgeRecord {
    pub fn new(a: VertexId, b: VertexId) -> Self {
        if a <= b {
            EdgeRecord { u: a, v: b }
        } else {
            EdgeRecord { u: b, v: a }
        }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

#[inline]
fn pack(u: VertexId, v: VertexId) -> u64 {
    let (lo, hi) = if u < v { (u, v) } else { (v, u) };
    ((hi as u64) << 32) | lo as u64
}

#[inline]
fn unpack(key: u64) -> (VertexId, VertexId) {
    ((key & 0xffff_ffff) as VertexId, (key >> 32) as VertexId)
}

/// Collects undirected edges, dropping self-loops and duplicates, and builds a
/// [`Graph`]. Memory stays proportional to the number of distinct edges: the
/// buffer is compacted whenever it doubles past the last compaction.
#[derive(Debug)]
pub struct EdgeBuilder {
    n: usize,
    keys: Vec<u64>,
    sorted: bool,
    compacted: usize,
}

impl EdgeBuilder {
    const MIN_COMPACTION: usize = 1 << 20;

    pub fn new(n: usize) -> Self {
        EdgeBuilder {
            n,
            keys: Vec::new(),
            sorted: true,
            compacted: 0,
        }
    }

    pub fn with_capacity(n: usize, edges: usize) -> Self {
        let mut b = Self::new(n);
        b.keys.reserve(edges);
        b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Adds an edge. Both endpoints must be `< n`; self-loops are ignored.
    #[inline]
    pub fn push(&mut self, u: VertexId, v: VertexId) {
        debug_assert!((u as usize) < self.n && (v as usize) < self.n);
        if u == v {
            return;
        }
        let key = pack(u, v);
        if let Some(&last) = self.keys.last() {
            if key == last {
                return;
            }
            if key < last {
                self.sorted = false;
            }
        }
        self.keys.push(key);
        if !self.sorted && self.keys.len() >= (2 * self.compacted).max(Self::MIN_COMPACTION) {
            self.compact();
        }
    }

    /// Adds an edge after checking the endpoints against `n`.
    pub fn try_push(&mut self, u: u64, v: u64) -> Result<(), GraphError> {
        for id in [u, v] {
            if id >= self.n as u64 {
                return Err(GraphError::OutOfRange { id, n: self.n });
            }
        }
        self.push(u as VertexId, v as VertexId);
        Ok(())
    }

    fn compact(&mut self) {
        self.keys.sort_unstable();
        self.keys.dedup();
        self.sorted = true;
        self.compacted = self.keys.len();
    }

    pub fn build(mut self) -> Graph {
        if !self.sorted {
            self.compact();
        }
        Graph::from_sorted_keys(self.n, &self.keys)
    }
}

/// Immutable undirected simple graph in compressed sparse row form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    /// Builds a normalized graph from arbitrary edges over `[0, n)`.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        if n > u32::MAX as usize {
            return Err(GraphError::TooManyVertices(n));
        }
        let mut b = EdgeBuilder::new(n);
        for (u, v) in edges {
            b.try_push(u, v)?;
        }
        Ok(b.build())
    }

    /// Wraps CSR arrays that already satisfy the graph invariants.
    pub(crate) fn from_csr(offsets: Vec<usize>, targets: Vec<VertexId>) -> Self {
        let g = Graph { offsets, targets };
        debug_assert!(g.check_invariants().is_ok());
        g
    }

    /// `keys` must be sorted by (max endpoint, min endpoint), unique, loop free.
    fn from_sorted_keys(n: usize, keys: &[u64]) -> Self {
        let mut degree = vec![0usize; n + 1];
        for &k in keys {
            let (lo, hi) = unpack(k);
            degree[lo as usize] += 1;
            degree[hi as usize] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut cursor = offsets.clone();
        let mut targets = vec![0 as VertexId; 2 * keys.len()];
        // Within each list, smaller neighbors arrive in the block of the
        // vertex itself and larger ones in later blocks, so lists come out
        // sorted without a second pass.
        for &k in keys {
            let (lo, hi) = unpack(k);
            targets[cursor[lo as usize]] = hi;
            cursor[lo as usize] += 1;
            targets[cursor[hi as usize]] = lo;
            cursor[hi as usize] += 1;
        }
        let g = Graph { offsets, targets };
        debug_assert!(g.check_invariants().is_ok());
        g
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.n() as VertexId
    }

    /// Canonical edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = EdgeRecord> + '_ {
        self.vertices().flat_map(move |u| {
            let adj = self.neighbors(u);
            let start = adj.partition_point(|&w| w <= u);
            adj[start..].iter().map(move |&v| EdgeRecord { u, v })
        })
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn isolated_count(&self) -> usize {
        self.vertices().filter(|&v| self.degree(v) == 0).count()
    }

    pub fn check_invariants(&self) -> Result<(), GraphError> {
        let n = self.n();
        if !self.targets.len().is_multiple_of(2) {
            return Err(GraphError::Invariant("odd adjacency total".into()));
        }
        for v in self.vertices() {
            let adj = self.neighbors(v);
            for w in adj.windows(2) {
                if w[0] >= w[1] {
                    return Err(GraphError::Invariant(format!(
                        "adjacency of {v} unsorted or duplicated"
                    )));
                }
            }
            for &u in adj {
                if u as usize >= n {
                    return Err(GraphError::Invariant(format!("neighbor {u} out of range")));
                }
                if u == v {
                    return Err(GraphError::Invariant(format!("self-loop at {v}")));
                }
                if !self.has_edge(u, v) {
                    return Err(GraphError::Invariant(format!("edge {v}->{u} not symmetric")));
                }
            }
        }
        Ok(())
    }
}

/// Vertex to component-representative map.
///
/// Representatives are themselves members of their class, so
/// `label(label(v)) == label(v)`. Assignments produced by this crate always
/// use the minimum id of each class; [`ComponentAssignment::from_labels`]
/// also accepts other representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentAssignment {
    labels: Vec<VertexId>,
}

impl ComponentAssignment {
    pub fn identity(n: usize) -> Self {
        ComponentAssignment {
            labels: (0..n as VertexId).collect(),
        }
    }

    pub fn from_labels(labels: Vec<VertexId>) -> Result<Self, GraphError> {
        let n = labels.len();
        for (v, &l) in labels.iter().enumerate() {
            if l as usize >= n {
                return Err(GraphError::OutOfRange { id: l as u64, n });
            }
            if labels[l as usize] != l {
                return Err(GraphError::NotIdempotent {
                    vertex: v as VertexId,
                });
            }
        }
        Ok(ComponentAssignment { labels })
    }

    /// Groups vertices by an arbitrary class key; each class is represented
    /// by its smallest member.
    pub fn from_class_keys<K, I>(keys: I) -> Self
    where
        K: Hash + Eq,
        I: IntoIterator<Item = K>,
    {
        let mut first: HashMap<K, VertexId> = HashMap::new();
        let labels = keys
            .into_iter()
            .enumerate()
            .map(|(v, k)| *first.entry(k).or_insert(v as VertexId))
            .collect();
        ComponentAssignment { labels }
    }

    /// Same as [`from_class_keys`](Self::from_class_keys) for keys below `n`.
    pub fn from_dense_keys(keys: &[VertexId]) -> Self {
        let mut first = vec![VertexId::MAX; keys.len()];
        let labels = keys
            .iter()
            .enumerate()
            .map(|(v, &k)| {
                let slot = &mut first[k as usize];
                if *slot == VertexId::MAX {
                    *slot = v as VertexId;
                }
                *slot
            })
            .collect();
        ComponentAssignment { labels }
    }

    #[inline]
    pub fn label(&self, v: VertexId) -> VertexId {
        self.labels[v as usize]
    }

    pub fn labels(&self) -> &[VertexId] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_components(&self) -> usize {
        self.labels
            .iter()
            .enumerate()
            .filter(|&(v, &l)| v as VertexId == l)
            .count()
    }

    /// The same partition with every class represented by its minimum.
    pub fn canonical(&self) -> Self {
        ComponentAssignment::from_dense_keys(&self.labels)
    }
}

/// True iff both assignments induce the same partition of the same universe.
pub fn partition_equal(
    a: &ComponentAssignment,
    b: &ComponentAssignment,
) -> Result<bool, GraphError> {
    partition_equal_labels(a.labels(), b.labels())
}

/// [`partition_equal`] over raw label slices; labels may be arbitrary keys.
pub fn partition_equal_labels<A, B>(a: &[A], b: &[B]) -> Result<bool, GraphError>
where
    A: Hash + Eq + Copy,
    B: Hash + Eq + Copy,
{
    if a.len() != b.len() {
        return Err(GraphError::UniverseMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let mut fwd: HashMap<A, B> = HashMap::new();
    let mut bwd: HashMap<B, A> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        if *fwd.entry(x).or_insert(y) != y || *bwd.entry(y).or_insert(x) != x {
            return Ok(false);
        }
    }
    Ok(true)
}
