//! SNAP-style edge lists and component TSV files.

use std::io::{BufRead, Write};

use super::{ComponentAssignment, EdgeBuilder, Graph, GraphError, VertexId};

/// Dense id to external id table. External ids are kept sorted, so dense order
/// agrees with external order and the smallest dense id of a class is also
/// its smallest external id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdTable {
    external: Vec<u64>,
}

impl IdTable {
    pub fn identity(n: usize) -> Self {
        IdTable {
            external: (0..n as u64).collect(),
        }
    }

    /// `external` must be strictly increasing.
    pub fn from_sorted(external: Vec<u64>) -> Self {
        debug_assert!(external.windows(2).all(|w| w[0] < w[1]));
        IdTable { external }
    }

    pub fn len(&self) -> usize {
        self.external.len()
    }

    pub fn is_empty(&self) -> bool {
        self.external.is_empty()
    }

    #[inline]
    pub fn external(&self, v: VertexId) -> u64 {
        self.external[v as usize]
    }

    pub fn dense(&self, external: u64) -> Option<VertexId> {
        self.external
            .binary_search(&external)
            .ok()
            .map(|i| i as VertexId)
    }
}

fn parse_id(tok: &str, line: usize) -> Result<u64, GraphError> {
    tok.parse::<u64>().map_err(|e| GraphError::Parse {
        line,
        reason: format!("invalid vertex id {tok:?}: {e}"),
    })
}

/// Reads a whitespace separated edge list. Lines starting with `#` and blank
/// lines are skipped. Every id that appears becomes a vertex, including ids
/// that only occur in self-loops.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<(Graph, IdTable), GraphError> {
    let mut pairs: Vec<(u64, u64)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut toks = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (toks.next(), toks.next(), toks.next()) else {
            return Err(GraphError::Parse {
                line: lineno,
                reason: "expected exactly two vertex ids".into(),
            });
        };
        pairs.push((parse_id(a, lineno)?, parse_id(b, lineno)?));
    }

    let mut ids: Vec<u64> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    ids.sort_unstable();
    ids.dedup();
    if ids.len() > u32::MAX as usize {
        return Err(GraphError::TooManyVertices(ids.len()));
    }
    let table = IdTable::from_sorted(ids);

    let mut builder = EdgeBuilder::with_capacity(table.len(), pairs.len());
    for (a, b) in pairs {
        // Both ids are in the table by construction.
        let u = table.dense(a).expect("id collected above");
        let v = table.dense(b).expect("id collected above");
        builder.push(u, v);
    }
    Ok((builder.build(), table))
}

/// Writes canonical edges (`u < v`) one per line using external ids.
pub fn write_edge_list<W: Write>(g: &Graph, ids: &IdTable, mut out: W) -> std::io::Result<()> {
    for e in g.edges() {
        writeln!(out, "{} {}", ids.external(e.u), ids.external(e.v))?;
    }
    out.flush()
}

/// Writes `external_id<TAB>representative` lines sorted by external id.
pub fn write_assignment_tsv<W: Write>(
    a: &ComponentAssignment,
    ids: &IdTable,
    mut out: W,
) -> std::io::Result<()> {
    for (v, &l) in a.labels().iter().enumerate() {
        writeln!(out, "{}\t{}", ids.external(v as VertexId), ids.external(l))?;
    }
    out.flush()
}

pub fn read_assignment_tsv<R: BufRead>(reader: R) -> Result<Vec<(u64, u64)>, GraphError> {
    let mut rows = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut toks = line.split('\t');
        let (Some(a), Some(b), None) = (toks.next(), toks.next(), toks.next()) else {
            return Err(GraphError::Parse {
                line: lineno,
                reason: "expected two tab separated ids".into(),
            });
        };
        rows.push((parse_id(a.trim(), lineno)?, parse_id(b.trim(), lineno)?));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_minimal_path() {
        let (g, ids) = load_edge_list("1 2\n2 3\n".as_bytes()).unwrap();
        assert_eq!((g.n(), g.m()), (3, 2));
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(ids.external(0), 1);
    }

    #[test]
    fn drops_self_loops_and_duplicates() {
        let (g, ids) = load_edge_list("7 7\n7 9\n9 7\n".as_bytes()).unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
        assert_eq!(ids.dense(9), Some(1));
    }

    #[test]
    fn comments_blank_lines_and_tabs() {
        let text = "# Nodes: 3 Edges: 2\n\n10\t20\n  20   30  \n# trailing\n";
        let (g, _) = load_edge_list(text.as_bytes()).unwrap();
        assert_eq!((g.n(), g.m()), (3, 2));
    }

    #[test]
    fn empty_input_is_empty_graph() {
        let (g, ids) = load_edge_list("".as_bytes()).unwrap();
        assert_eq!((g.n(), g.m()), (0, 0));
        assert!(ids.is_empty());
    }

    #[test]
    fn malformed_line_reports_line_number() {
        for text in ["1 2\n3\n", "1 2\n3 x\n", "1 2\n3 4 5\n", "1 2\n-1 4\n"] {
            match load_edge_list(text.as_bytes()) {
                Err(GraphError::Parse { line, .. }) => assert_eq!(line, 2, "{text:?}"),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn assignment_tsv_roundtrip() {
        let ids = IdTable::from_sorted(vec![3, 8, 11]);
        let a = ComponentAssignment::from_labels(vec![0, 1, 0]).unwrap();
        let mut buf = Vec::new();
        write_assignment_tsv(&a, &ids, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "3\t3\n8\t8\n11\t3\n");
        assert_eq!(
            read_assignment_tsv(buf.as_slice()).unwrap(),
            vec![(3, 3), (8, 8), (11, 3)]
        );
    }
}
