use crate::graph::VertexId;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 output function applied to `x + golden gamma`.
#[inline]
pub fn mix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Position of a vertex in a phase ordering. Lower is higher priority; the
/// vertex id breaks hash ties, so the order is total.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Priority {
    pub hash: u64,
    pub id: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Source {
    Hashed { stream: u64, n: usize },
    Table(Vec<u64>),
}

/// Per-phase random ordering of vertices.
///
/// Hashed orderings are a fixed function of `(global_seed, phase_index,
/// vertex_id)`:
///
/// ```text
/// stream = mix64(mix64(global_seed ^ GAMMA) ^ (phase_index * C1 + 1))
/// hash(v) = mix64(stream ^ (v * C2))
/// ```
///
/// with `C1 = 0xbf58476d1ce4e5b9` and `C2 = 0x94d049bb133111eb`. The
/// algorithms only ever compare priorities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PriorityMap {
    source: Source,
}

impl PriorityMap {
    pub fn sample(global_seed: u64, phase_index: u64, n: usize) -> Self {
        let stream = mix64(
            mix64(global_seed ^ GOLDEN_GAMMA)
                ^ phase_index
                    .wrapping_mul(0xbf58_476d_1ce4_e5b9)
                    .wrapping_add(1),
        );
        PriorityMap {
            source: Source::Hashed { stream, n },
        }
    }

    /// Explicit hash per vertex.
    pub fn from_hashes(hashes: Vec<u64>) -> Self {
        PriorityMap {
            source: Source::Table(hashes),
        }
    }

    /// Orders vertices by id.
    pub fn identity(n: usize) -> Self {
        Self::from_hashes((0..n as u64).collect())
    }

    pub fn len(&self) -> usize {
        match &self.source {
            Source::Hashed { n, .. } => *n,
            Source::Table(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn hash(&self, v: VertexId) -> u64 {
        match &self.source {
            Source::Hashed { stream, .. } => {
                mix64(stream ^ (v as u64).wrapping_mul(0x94d0_49bb_1331_11eb))
            }
            Source::Table(t) => t[v as usize],
        }
    }

    #[inline]
    pub fn key(&self, v: VertexId) -> Priority {
        Priority {
            hash: self.hash(v),
            id: v,
        }
    }

    /// True if `a` comes before `b` in the ordering.
    #[inline]
    pub fn precedes(&self, a: VertexId, b: VertexId) -> bool {
        self.key(a) < self.key(b)
    }

    /// All hashes, indexed by vertex.
    pub fn hashes(&self) -> Vec<u64> {
        match &self.source {
            Source::Table(t) => t.clone(),
            Source::Hashed { n, .. } => (0..*n as VertexId).map(|v| self.hash(v)).collect(),
        }
    }
}
