//! Seeded graph families and BFS distance utilities.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contraction::mix64;
use crate::graph::{EdgeBuilder, Graph, GraphError, VertexId};

#[derive(Debug, Error)]
pub enum GenError {
    #[error("edge probability must lie in [0, 1], got {0}")]
    InvalidProbability(f64),
    #[error("graph would have {0} vertices, more than supported")]
    TooLarge(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    #[default]
    Gnp,
    /// G(n, p) plus `extra_edges`.
    GnpPlus,
    Path,
    Cycle,
    /// Vertex 0 joined to all others.
    Star,
    Complete,
    /// Heap-ordered: the parent of `i` is `(i - 1) / 2`.
    BinaryTree,
    /// Path of `n` spine vertices, each with `legs` pendant vertices.
    Caterpillar,
    /// `parts` placed side by side with consecutive id ranges.
    DisjointUnion,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub p: f64,
    pub legs: usize,
    pub extra_edges: Vec<(u64, u64)>,
    pub parts: Vec<GenSpec>,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(family: Family, n: usize) -> Self {
        GenSpec {
            family,
            n,
            ..Self::default()
        }
    }

    pub fn gnp(n: usize, p: f64, seed: u64) -> Self {
        GenSpec {
            family: Family::Gnp,
            n,
            p,
            seed,
            ..Self::default()
        }
    }

    pub fn path(n: usize) -> Self {
        Self::new(Family::Path, n)
    }

    /// Vertex count of the generated graph.
    pub fn vertex_count(&self) -> usize {
        match self.family {
            Family::Caterpillar => self.n.saturating_mul(self.legs + 1),
            Family::DisjointUnion => self.parts.iter().map(GenSpec::vertex_count).sum(),
            _ => self.n,
        }
    }
}

pub fn generate(spec: &GenSpec) -> Result<Graph, GenError> {
    let total = spec.vertex_count();
    if total > u32::MAX as usize {
        return Err(GenError::TooLarge(total));
    }
    let n = spec.n;
    let edges = |it: &mut dyn Iterator<Item = (usize, usize)>| {
        let mut b = EdgeBuilder::new(total);
        for (u, v) in it {
            b.push(u as VertexId, v as VertexId);
        }
        b.build()
    };
    let g = match spec.family {
        Family::Gnp => gnp(n, spec.p, spec.seed)?,
        Family::GnpPlus => {
            let base = gnp(n, spec.p, spec.seed)?;
            let mut b = EdgeBuilder::with_capacity(n, base.m() + spec.extra_edges.len());
            for e in base.edges() {
                b.push(e.u, e.v);
            }
            for &(u, v) in &spec.extra_edges {
                b.try_push(u, v)?;
            }
            b.build()
        }
        Family::Path => edges(&mut (1..n).map(|i| (i - 1, i))),
        Family::Cycle => {
            let wrap = (n >= 3).then_some((n - 1, 0));
            edges(&mut (1..n).map(|i| (i - 1, i)).chain(wrap))
        }
        Family::Star => edges(&mut (1..n).map(|i| (0, i))),
        Family::Complete => edges(&mut (1..n).flat_map(|v| (0..v).map(move |u| (u, v)))),
        Family::BinaryTree => edges(&mut (1..n).map(|i| ((i - 1) / 2, i))),
        Family::Caterpillar => {
            let legs = spec.legs;
            let spine = (1..n).map(|i| (i - 1, i));
            let pendants =
                (0..n).flat_map(move |s| (0..legs).map(move |j| (s, n + s * legs + j)));
            edges(&mut spine.chain(pendants))
        }
        Family::DisjointUnion => {
            let mut b = EdgeBuilder::new(total);
            let mut offset = 0 as VertexId;
            for (i, part) in spec.parts.iter().enumerate() {
                let part = GenSpec {
                    seed: part.seed ^ mix64(spec.seed.wrapping_add(i as u64)),
                    ..part.clone()
                };
                let pg = generate(&part)?;
                for e in pg.edges() {
                    b.push(e.u + offset, e.v + offset);
                }
                offset += pg.n() as VertexId;
            }
            b.build()
        }
    };
    Ok(g)
}

/// G(n, p) by geometric skipping over the pairs `(w, v)`, `w < v`, in
/// order; runs in `O(n + m)` expected time.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph, GenError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GenError::InvalidProbability(p));
    }
    if n > u32::MAX as usize {
        return Err(GenError::TooLarge(n));
    }
    if p == 1.0 {
        return generate(&GenSpec::new(Family::Complete, n));
    }
    let pairs = n as f64 * (n as f64 - 1.0) / 2.0;
    let expected = (pairs * p * 1.01) as usize + 16;
    let mut b = EdgeBuilder::with_capacity(n, if p > 0.0 { expected } else { 0 });
    if p > 0.0 && n >= 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let log_q = (1.0 - p).ln();
        let (mut v, mut w): (usize, i64) = (1, -1);
        loop {
            let r: f64 = rng.gen();
            let skip = ((1.0 - r).ln() / log_q).floor();
            // Huge skips run past the last pair.
            if skip >= pairs {
                break;
            }
            w += 1 + skip as i64;
            while v < n && w >= v as i64 {
                w -= v as i64;
                v += 1;
            }
            if v >= n {
                break;
            }
            b.push(w as VertexId, v as VertexId);
        }
    }
    Ok(b.build())
}

/// The same graph with vertex ids permuted uniformly at random.
pub fn relabel_random(g: &Graph, seed: u64) -> Graph {
    let mut perm: Vec<VertexId> = g.vertices().collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut b = EdgeBuilder::with_capacity(g.n(), g.m());
    for e in g.edges() {
        b.push(perm[e.u as usize], perm[e.v as usize]);
    }
    b.build()
}

/// BFS distances from `s`; `u32::MAX` marks unreachable vertices.
pub fn bfs_distances(g: &Graph, s: VertexId) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.n()];
    let mut queue = VecDeque::new();
    dist[s as usize] = 0;
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        let d = dist[v as usize] + 1;
        for &u in g.neighbors(v) {
            if dist[u as usize] == u32::MAX {
                dist[u as usize] = d;
                queue.push_back(u);
            }
        }
    }
    dist
}

/// Largest eccentricity over all vertices, measured inside each component.
/// Runs 64 breadth-first searches at once as bit masks, so the cost is
/// `O((n / 64) * D * (n + m))`; meant for graphs of small diameter.
pub fn diameter(g: &Graph) -> u32 {
    let n = g.n();
    let mut best = 0;
    let mut visited = vec![0u64; n];
    let mut frontier = vec![0u64; n];
    let mut next = vec![0u64; n];
    for start in (0..n).step_by(64) {
        visited.fill(0);
        frontier.fill(0);
        for (bit, s) in (start..n.min(start + 64)).enumerate() {
            visited[s] = 1 << bit;
            frontier[s] = 1 << bit;
        }
        let mut level = 0;
        loop {
            let mut any = false;
            for v in g.vertices() {
                let mut acc = 0u64;
                for &u in g.neighbors(v) {
                    acc |= frontier[u as usize];
                }
                acc &= !visited[v as usize];
                next[v as usize] = acc;
                if acc != 0 {
                    visited[v as usize] |= acc;
                    any = true;
                }
            }
            if !any {
                break;
            }
            level += 1;
            std::mem::swap(&mut frontier, &mut next);
        }
        best = best.max(level);
    }
    best
}

/// Lower bound on the diameter by repeated double sweeps: BFS from a vertex,
/// jump to the farthest vertex found, repeat. Every value returned is the
/// eccentricity of some vertex.
pub fn diameter_lower_bound(g: &Graph, sweeps: usize, seed: u64) -> u32 {
    let candidates: Vec<VertexId> = g.vertices().filter(|&v| g.degree(v) > 0).collect();
    let Some(&first) = candidates.choose(&mut ChaCha8Rng::seed_from_u64(seed)) else {
        return 0;
    };
    let mut best = 0;
    let mut s = first;
    for _ in 0..sweeps.max(1) {
        let dist = bfs_distances(g, s);
        let (far, ecc) = dist
            .iter()
            .enumerate()
            .filter(|&(_, &d)| d != u32::MAX)
            .max_by_key(|&(v, &d)| (d, std::cmp::Reverse(v)))
            .map(|(v, &d)| (v as VertexId, d))
            .expect("source is reachable from itself");
        best = best.max(ecc);
        if far == s {
            break;
        }
        s = far;
    }
    best
}
