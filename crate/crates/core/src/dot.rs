//! Graphviz export and the matching reader.
//!
//! Nodes are written as `n<id>` with the 0-based flat id, so reading a file
//! back only needs the node names: `n<id>` maps to vertex `id`. Labels are
//! human-facing and 1-based (`v3` or `v2,4`). Node count is recorded in a
//! `// vertices: N` comment, since edge lines alone would lose isolated
//! vertices.

use std::fmt::Write as _;

use crate::coloring::Coloring;
use crate::graph::{Graph, GraphError};
use crate::product::ProductGraph;

const FILLS: [&str; 8] = [
    "red", "blue", "green", "gold", "orchid", "cyan", "orange", "gray",
];

fn fill(c: u32) -> &'static str {
    FILLS[c as usize % FILLS.len()]
}

fn render(g: &Graph, label: impl Fn(usize) -> String, coloring: Option<&Coloring>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph G {{");
    let _ = writeln!(out, "  // vertices: {}", g.order());
    for v in 0..g.order() {
        match coloring {
            Some(c) => {
                let _ = writeln!(
                    out,
                    "  n{v} [label=\"{}\", style=filled, fillcolor={}];",
                    label(v),
                    fill(c.color(v))
                );
            }
            None => {
                let _ = writeln!(out, "  n{v} [label=\"{}\"];", label(v));
            }
        }
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  n{u} -- n{v};");
    }
    out.push_str("}\n");
    out
}

/// DOT for a plain graph; `coloring` must cover every vertex.
pub fn graph_to_dot(g: &Graph, coloring: Option<&Coloring>) -> String {
    render(g, |v| format!("v{}", v + 1), coloring)
}

/// DOT for a product, labelled `vi,j`.
pub fn product_to_dot(pg: &ProductGraph, coloring: Option<&Coloring>) -> String {
    render(pg.graph(), |v| format!("v{}", pg.label(v)), coloring)
}

/// Rebuild the graph from DOT produced by this module.
pub fn parse_dot(text: &str) -> Result<Graph, GraphError> {
    let mut n = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix("// vertices:") {
            n = Some(rest.trim().parse().map_err(|_| GraphError::Malformed {
                at: crate::graph::At(Some(idx + 1)),
                reason: "bad vertex count".into(),
            })?);
        } else if let Some((a, b)) = line.trim_end_matches(';').split_once("--") {
            let node = |s: &str| -> Result<usize, GraphError> {
                s.trim()
                    .strip_prefix('n')
                    .and_then(|id| id.parse().ok())
                    .ok_or_else(|| GraphError::Malformed {
                        at: crate::graph::At(Some(idx + 1)),
                        reason: format!("unknown node name {:?}", s.trim()),
                    })
            };
            edges.push((node(a)?, node(b)?));
        }
    }
    Graph::from_edges(n.ok_or(GraphError::MissingHeader)?, edges)
}
