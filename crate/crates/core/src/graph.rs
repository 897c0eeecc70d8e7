//! Undirected simple graphs, edge-list ingestion and BFS metrics.
//!
//! Vertex ids are dense and 0-based. Distances between vertices in different
//! components are reported as `None`; there is no numeric "infinity".

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Line reference used in error messages; `None` when the error did not come
/// from parsed text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct At(pub Option<usize>);

impl fmt::Display for At {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(line) => write!(f, "line {line}: "),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("missing vertex count header")]
    MissingHeader,
    #[error("{at}malformed line: {reason}")]
    Malformed { at: At, reason: String },
    #[error("{at}vertex {id} out of range for a graph on {n} vertices")]
    OutOfRange { at: At, id: usize, n: usize },
    #[error("{at}duplicate edge {u} {v}")]
    DuplicateEdge { at: At, u: usize, v: usize },
    #[error("{at}self-loop at vertex {v}")]
    SelfLoop { at: At, v: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex map has {got} entries, expected {expected}")]
    MapLength { got: usize, expected: usize },
    #[error("vertex map is not injective: {0} is hit twice")]
    NonInjective(usize),
    #[error("vertex map does not preserve edge {0}-{1}")]
    NotEdgePreserving(usize, usize),
}

/// Immutable undirected simple graph stored as sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.insert_edge(u, v, At(None))?;
        }
        g.finish();
        Ok(g)
    }

    fn insert_edge(&mut self, u: usize, v: usize, at: At) -> Result<(), GraphError> {
        let n = self.adj.len();
        for id in [u, v] {
            if id >= n {
                return Err(GraphError::OutOfRange { at, id, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop { at, v });
        }
        if self.adj[u].contains(&v) {
            let (u, v) = (u.min(v), u.max(v));
            return Err(GraphError::DuplicateEdge { at, u, v });
        }
        self.adj[u].push(v);
        self.adj[v].push(u);
        Ok(())
    }

    fn finish(&mut self) {
        for list in &mut self.adj {
            list.sort_unstable();
        }
    }

    /// The path P_n.
    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path edges are valid")
    }

    /// The star K_{1,leaves} with center 0.
    pub fn star(leaves: usize) -> Self {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("star edges are valid")
    }

    /// The cycle C_n, n ≥ 3.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle edges are valid")
    }

    /// Disjoint union; vertices of `other` are shifted past ours.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.order();
        let edges = self
            .edges()
            .chain(other.edges().map(|(u, v)| (u + off, v + off)));
        Graph::from_edges(off + other.order(), edges).expect("union of valid graphs")
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Hop distances from `src`; `None` for unreachable vertices.
    pub fn bfs(&self, src: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.order()];
        let mut queue = VecDeque::new();
        dist[src] = Some(0);
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.order() == 0 || self.bfs(0).iter().all(Option::is_some)
    }

    /// Connected and `|E| = |V| - 1`. The empty graph is not a tree.
    pub fn is_tree(&self) -> bool {
        self.order() > 0 && self.edge_count() + 1 == self.order() && self.is_connected()
    }

    /// Acyclic: every component is a tree.
    pub fn is_forest(&self) -> bool {
        self.edge_count() + connected_components(self).len() == self.order()
    }

    /// Subgraph induced on `keep` (ids in the order given).
    pub fn induced_subgraph(&self, keep: &[usize]) -> Subgraph {
        let mut to_local = vec![usize::MAX; self.order()];
        for (local, &v) in keep.iter().enumerate() {
            to_local[v] = local;
        }
        let edges = self
            .edges()
            .filter(|&(u, v)| to_local[u] != usize::MAX && to_local[v] != usize::MAX)
            .map(|(u, v)| (to_local[u], to_local[v]));
        let graph = Graph::from_edges(keep.len(), edges).expect("induced subgraph is simple");
        Subgraph {
            graph,
            to_parent: keep.to_vec(),
        }
    }

    /// Serialize in the edge-list text format accepted by [`parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.order());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

/// A graph carved out of a parent graph, with the map back to parent ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: Graph,
    pub to_parent: Vec<usize>,
}

impl Subgraph {
    pub fn vertex_set(&self, parent_order: usize) -> VertexSet {
        VertexSet::from_ids(parent_order, self.to_parent.iter().copied())
    }
}

/// Parse the edge-list text format.
///
/// The first non-comment line holds the vertex count; each following
/// non-empty line holds one edge `u v`. Lines starting with `#` are comments.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut graph: Option<Graph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let at = At(Some(idx + 1));
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match graph.as_mut() {
            None => {
                if fields.len() != 1 {
                    return Err(GraphError::Malformed {
                        at,
                        reason: "expected a single vertex count".into(),
                    });
                }
                let n = parse_id(fields[0], at)?;
                graph = Some(Graph::empty(n));
            }
            Some(g) => {
                if fields.len() != 2 {
                    return Err(GraphError::Malformed {
                        at,
                        reason: format!("expected two vertex ids, found {} fields", fields.len()),
                    });
                }
                let u = parse_id(fields[0], at)?;
                let v = parse_id(fields[1], at)?;
                g.insert_edge(u, v, at)?;
            }
        }
    }
    let mut g = graph.ok_or(GraphError::MissingHeader)?;
    g.finish();
    Ok(g)
}

fn parse_id(s: &str, at: At) -> Result<usize, GraphError> {
    s.parse().map_err(|_| GraphError::Malformed {
        at,
        reason: format!("{s:?} is not a non-negative integer"),
    })
}

/// Anything that can report shortest-path distances between dense vertex ids.
pub trait Metric {
    fn order(&self) -> usize;
    fn dist(&self, a: usize, b: usize) -> Option<u32>;
}

/// All-pairs hop distances with cached eccentricities.
///
/// Eccentricity, diameter and radius are taken over finite distances only;
/// [`DistanceMatrix::is_connected`] tells whether any pair was unreachable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<Option<u32>>,
    ecc: Vec<u32>,
    diameter: u32,
    radius: u32,
    connected: bool,
}

impl DistanceMatrix {
    pub fn get(&self, u: usize, v: usize) -> Option<u32> {
        self.dist[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[Option<u32>] {
        &self.dist[u * self.n..(u + 1) * self.n]
    }

    pub fn ecc(&self, v: usize) -> u32 {
        self.ecc[v]
    }

    pub fn eccentricities(&self) -> &[u32] {
        &self.ecc
    }

    pub fn diameter(&self) -> u32 {
        self.diameter
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Peripheral vertices in increasing id order.
    pub fn peripheral(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&v| self.ecc[v] == self.diameter)
            .collect()
    }
}

impl Metric for DistanceMatrix {
    fn order(&self) -> usize {
        self.n
    }

    fn dist(&self, a: usize, b: usize) -> Option<u32> {
        self.get(a, b)
    }
}

/// BFS from every vertex.
pub fn all_pairs_distances(g: &Graph) -> DistanceMatrix {
    let n = g.order();
    let mut dist = Vec::with_capacity(n * n);
    for v in 0..n {
        dist.extend(g.bfs(v));
    }
    let connected = dist.iter().all(Option::is_some);
    let ecc: Vec<u32> = dist
        .chunks(n.max(1))
        .take(n)
        .map(|row| row.iter().flatten().copied().max().unwrap_or(0))
        .collect();
    let diameter = ecc.iter().copied().max().unwrap_or(0);
    let radius = ecc.iter().copied().min().unwrap_or(0);
    DistanceMatrix {
        n,
        dist,
        ecc,
        diameter,
        radius,
        connected,
    }
}

/// Membership bitmap over `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexSet {
    members: Vec<bool>,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet {
            members: vec![false; n],
        }
    }

    pub fn from_ids<I: IntoIterator<Item = usize>>(n: usize, ids: I) -> Self {
        let mut s = VertexSet::new(n);
        for v in ids {
            s.insert(v);
        }
        s
    }

    pub fn insert(&mut self, v: usize) {
        self.members[v] = true;
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.get(v).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn universe(&self) -> usize {
        self.members.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(v, _)| v)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let ids = Vec::<usize>::deserialize(d)?;
        let n = ids.iter().map(|&v| v + 1).max().unwrap_or(0);
        Ok(VertexSet::from_ids(n, ids))
    }
}

/// Maximal connected pieces, each re-indexed from 0 in increasing parent-id
/// order. Components are listed by their smallest vertex.
pub fn connected_components(g: &Graph) -> Vec<Subgraph> {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut members = Vec::new();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            members.push(u);
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        out.push(g.induced_subgraph(&members));
    }
    out
}

/// Center (minimum eccentricity) and periphery (eccentricity = diameter).
pub fn center_and_peripheral(dm: &DistanceMatrix) -> Result<(VertexSet, VertexSet), GraphError> {
    if !dm.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let n = dm.order();
    let center = VertexSet::from_ids(n, (0..n).filter(|&v| dm.ecc(v) == dm.radius()));
    let peripheral = VertexSet::from_ids(n, dm.peripheral());
    Ok((center, peripheral))
}

/// Whether `map` (sub vertex → host vertex) is an isometric embedding.
///
/// The map must be injective and send edges to edges; violations are errors
/// rather than a `false` answer.
pub fn is_isometric_embedding(
    sub: &Graph,
    host: &Graph,
    map: &[usize],
) -> Result<bool, GraphError> {
    if map.len() != sub.order() {
        return Err(GraphError::MapLength {
            got: map.len(),
            expected: sub.order(),
        });
    }
    let mut hit = vec![false; host.order()];
    for &h in map {
        if h >= host.order() {
            return Err(GraphError::OutOfRange {
                at: At(None),
                id: h,
                n: host.order(),
            });
        }
        if std::mem::replace(&mut hit[h], true) {
            return Err(GraphError::NonInjective(h));
        }
    }
    if let Some((u, v)) = sub.edges().find(|&(u, v)| !host.has_edge(map[u], map[v])) {
        return Err(GraphError::NotEdgePreserving(u, v));
    }
    for u in 0..sub.order() {
        let ds = sub.bfs(u);
        let dh = host.bfs(map[u]);
        if (0..sub.order()).any(|v| ds[v] != dh[map[v]]) {
            return Ok(false);
        }
    }
    Ok(true)
}
