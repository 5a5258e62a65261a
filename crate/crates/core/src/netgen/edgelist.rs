//! Plain-text edge lists: a header `L <vertex_count>` followed by one
//! `i j` pair per line (0-based, `i < j`). Lines starting with `#` are
//! comments.

use std::fmt::Write as _;
use std::path::Path;

use super::AdjacencyGraph;
use crate::error::{Error, Result};

pub fn write_edge_list(graph: &AdjacencyGraph) -> String {
    let mut out = String::new();
    writeln!(out, "L {}", graph.vertex_count()).unwrap();
    for (i, j) in graph.edges() {
        writeln!(out, "{i} {j}").unwrap();
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<AdjacencyGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (n, header) = lines.next().ok_or(Error::EdgeList {
        line: 0,
        reason: "missing `L <vertex_count>` header".into(),
    })?;
    let size = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["L", count] => count.parse::<usize>().map_err(|e| Error::EdgeList {
            line: n,
            reason: format!("bad vertex count: {e}"),
        })?,
        _ => {
            return Err(Error::EdgeList {
                line: n,
                reason: format!("expected `L <vertex_count>`, found `{header}`"),
            })
        }
    };

    let mut edges = Vec::new();
    for (n, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = fields.as_slice() else {
            return Err(Error::EdgeList {
                line: n,
                reason: format!("expected two vertex indices, found `{line}`"),
            });
        };
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|e| Error::EdgeList {
                line: n,
                reason: format!("bad vertex index `{s}`: {e}"),
            })
        };
        edges.push((parse(a)?, parse(b)?));
    }
    AdjacencyGraph::from_edges(size, &edges).map_err(|e| Error::EdgeList {
        line: 0,
        reason: e.to_string(),
    })
}

pub fn read_edge_list(path: &Path) -> Result<AdjacencyGraph> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text)
}
