use super::{ComponentAssignment, EdgeRecord, GraphError, VertexId};

/// Disjoint sets with union by rank and path compression.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<VertexId>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as VertexId).collect(),
            rank: vec![0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, x: VertexId) -> VertexId {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = x;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    /// Returns false if `a` and `b` were already in the same set.
    pub fn union(&mut self, a: VertexId, b: VertexId) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (ka, kb) = (self.rank[ra as usize], self.rank[rb as usize]);
        if ka < kb {
            self.parent[ra as usize] = rb;
        } else if ka > kb {
            self.parent[rb as usize] = ra;
        } else {
            self.parent[rb as usize] = ra;
            self.rank[ra as usize] += 1;
        }
        true
    }

    /// Current partition, each class labelled by its minimum member.
    pub fn assignment(&mut self) -> ComponentAssignment {
        let roots: Vec<VertexId> = (0..self.len() as VertexId).map(|v| self.find(v)).collect();
        ComponentAssignment::from_dense_keys(&roots)
    }
}

/// Exact connected components of the edges over `[0, n)`, consuming the edge
/// stream once. Memory is proportional to `n` only.
pub fn union_find_components<I>(edges: I, n: usize) -> Result<ComponentAssignment, GraphError>
where
    I: IntoIterator<Item = EdgeRecord>,
{
    let mut uf = UnionFind::new(n);
    for e in edges {
        for id in [e.u, e.v] {
            if id as usize >= n {
                return Err(GraphError::OutOfRange { id: id as u64, n });
            }
        }
        uf.union(e.u, e.v);
    }
    Ok(uf.assignment())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges(list: &[(u32, u32)]) -> Vec<EdgeRecord> {
        list.iter().map(|&(a, b)| EdgeRecord::new(a, b)).collect()
    }

    #[test]
    fn path_collapses_to_smallest_id() {
        // Path 1-2-3 on ids {1, 2, 3}; vertex 0 stays alone.
        let a = union_find_components(edges(&[(1, 2), (2, 3)]), 4).unwrap();
        assert_eq!(a.labels(), &[0, 1, 1, 1]);
    }

    #[test]
    fn two_disjoint_edges() {
        let a = union_find_components(edges(&[(0, 1), (2, 3)]), 4).unwrap();
        assert_eq!(a.labels(), &[0, 0, 2, 2]);
    }

    #[test]
    fn out_of_range_is_an_error() {
        let err = union_find_components(edges(&[(0, 4)]), 4).unwrap_err();
        assert!(matches!(err, GraphError::OutOfRange { id: 4, n: 4 }));
    }

    #[test]
    fn union_reports_merges() {
        let mut uf = UnionFind::new(3);
        assert!(uf.union(0, 1));
        assert!(!uf.union(1, 0));
        assert_eq!(uf.find(1), uf.find(0));
        assert_ne!(uf.find(2), uf.find(0));
    }
}
