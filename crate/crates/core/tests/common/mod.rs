//! Independent oracles and fixtures shared by the integration tests. Nothing
//! here calls into the union-find or contraction code it is checking.
#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use cc_contract::algorithms::FunctionalGraph;
use cc_contract::generators::{generate, gnp, Family, GenSpec};
use cc_contract::graph::Graph;

/// Component labels by breadth-first search; each component is labelled with
/// its smallest vertex.
pub fn bfs_labels(g: &Graph) -> Vec<u32> {
    let n = g.n();
    let mut label = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    for s in 0..n as u32 {
        if label[s as usize] != u32::MAX {
            continue;
        }
        label[s as usize] = s;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &u in g.neighbors(v) {
                if label[u as usize] == u32::MAX {
                    label[u as usize] = s;
                    queue.push_back(u);
                }
            }
        }
    }
    label
}

/// BFS over an explicit adjacency map, for graphs given as edge lists.
pub fn bfs_labels_edges(n: usize, edges: &[(u32, u32)]) -> Vec<u32> {
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    let mut label = vec![u32::MAX; n];
    for s in 0..n {
        if label[s] != u32::MAX {
            continue;
        }
        label[s] = s as u32;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if label[u as usize] == u32::MAX {
                    label[u as usize] = s as u32;
                    stack.push(u as usize);
                }
            }
        }
    }
    label
}

/// Weakly connected components of the digraph `v -> f(v)`.
pub fn h_wcc_labels(f: &FunctionalGraph) -> Vec<u32> {
    let edges: Vec<(u32, u32)> = (0..f.len() as u32)
        .filter_map(|v| f.get(v).map(|x| (v, x)))
        .collect();
    bfs_labels_edges(f.len(), &edges)
}

/// Same partition, regardless of representatives.
pub fn same_partition(a: &[u32], b: &[u32]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut fwd = HashMap::new();
    let mut bwd = HashMap::new();
    a.iter().zip(b).all(|(&x, &y)| {
        *fwd.entry(x).or_insert(y) == y && *bwd.entry(y).or_insert(x) == x
    })
}

/// Graph on `n` vertices whose edges are the set bits of `mask` over the
/// pairs `(i, j)`, `i < j`, in lexicographic order.
pub fn graph_from_mask(n: usize, mask: u32) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for i in 0..n as u64 {
        for j in i + 1..n as u64 {
            if mask >> bit & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Every labelled graph on at most six vertices.
pub fn all_small_graphs() -> impl Iterator<Item = Graph> {
    (0..=6usize).flat_map(|n| {
        let pairs = n * n.saturating_sub(1) / 2;
        (0..1u32 << pairs).map(move |mask| graph_from_mask(n, mask))
    })
}

/// 500 seeded random graphs, `n <= 2000`, cycling through
/// `p in {0.5/n, 2/n, ln n / n, 0.1}`.
pub fn random_suite(count: usize) -> Vec<Graph> {
    (0..count as u64)
        .map(|i| {
            let seed = 0x5eed_0000 + i;
            let n = 1 + (cc_contract::contraction::mix64(seed) % 2000) as usize;
            let nf = n as f64;
            let p = match i % 4 {
                0 => 0.5 / nf,
                1 => 2.0 / nf,
                2 => (nf.ln() / nf).min(1.0),
                _ => 0.1,
            };
            gnp(n, p, seed).unwrap()
        })
        .collect()
}

pub fn family(family: Family, n: usize) -> Graph {
    generate(&GenSpec::new(family, n)).unwrap()
}

pub fn path(n: usize) -> Graph {
    family(Family::Path, n)
}

/// Structured inputs: paths, cycles, stars, trees and disjoint unions.
pub fn structured_suite(max_n: usize) -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    let mut n = 1;
    while n <= max_n {
        for fam in [
            Family::Path,
            Family::Cycle,
            Family::Star,
            Family::BinaryTree,
        ] {
            out.push((format!("{fam:?}({n})"), family(fam, n)));
        }
        n *= 10;
    }
    out.push((
        "caterpillar(1000x3)".into(),
        generate(&GenSpec {
            legs: 3,
            ..GenSpec::new(Family::Caterpillar, 1000)
        })
        .unwrap(),
    ));
    let union = GenSpec {
        parts: vec![
            GenSpec::path(max_n / 4),
            GenSpec::new(Family::Cycle, max_n / 4),
            GenSpec::new(Family::Star, max_n / 4),
            GenSpec::new(Family::BinaryTree, max_n / 4),
            GenSpec::new(Family::Gnp, 0),
            GenSpec::path(1),
        ],
        ..GenSpec::new(Family::DisjointUnion, 0)
    };
    out.push((format!("union({max_n})"), generate(&union).unwrap()));
    out
}
