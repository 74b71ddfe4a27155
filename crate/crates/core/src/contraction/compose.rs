use crate::graph::{ComponentAssignment, VertexId};

use super::ContractionError;

/// A node that left the phase chain early, identified by its level (the
/// index of the graph it belonged to, 0 being the input) and its id there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrunedRecord {
    pub level: usize,
    pub node: VertexId,
}

/// Resolves the phase-0 partition from a mapping chain.
///
/// `chain[i]` maps level-`i` node ids to level-`i + 1` ids. A vertex follows
/// the chain until it reaches a pruned node or the last level; vertices that
/// end in the same place form one class, represented by its smallest member.
pub fn compose_mappings(
    n0: usize,
    chain: &[Vec<VertexId>],
    pruned: &[PrunedRecord],
) -> Result<ComponentAssignment, ContractionError> {
    let levels = chain.len();
    let mut by_level: Vec<Vec<VertexId>> = vec![Vec::new(); levels + 1];
    for r in pruned {
        if r.level > levels {
            return Err(ContractionError::Inconsistent(format!(
                "pruned node {} at level {} beyond chain of length {levels}",
                r.node, r.level
            )));
        }
        by_level[r.level].push(r.node);
    }

    const DONE: u64 = u64::MAX;
    // Per vertex: current node id while active, or final class key.
    let mut cur: Vec<VertexId> = (0..n0 as VertexId).collect();
    let mut key: Vec<u64> = vec![DONE; n0];
    let mut active: Vec<VertexId> = (0..n0 as VertexId).collect();

    for (level, stopped) in by_level.iter().enumerate() {
        let domain = chain.get(level).map_or(0, |m| m.len());
        let width = stopped
            .iter()
            .map(|&x| x as usize + 1)
            .max()
            .unwrap_or(0)
            .max(domain);
        let mut is_stopped = vec![false; width];
        for &x in stopped {
            is_stopped[x as usize] = true;
        }
        let class = |x: VertexId| ((level as u64) << 32) | x as u64;
        active.retain(|&v| {
            let x = cur[v as usize];
            if is_stopped.get(x as usize).copied().unwrap_or(false) || level == levels {
                key[v as usize] = class(x);
                false
            } else {
                true
            }
        });
        if level < levels {
            let map = &chain[level];
            for &v in &active {
                let x = cur[v as usize];
                let Some(&y) = map.get(x as usize) else {
                    return Err(ContractionError::Inconsistent(format!(
                        "vertex {v} reached node {x} at level {level}, outside the mapping domain"
                    )));
                };
                cur[v as usize] = y;
            }
        }
    }
    debug_assert!(active.is_empty());
    Ok(ComponentAssignment::from_class_keys(key))
}
