//! Exhaustive search for rainbow-free exact colorings, used as independent
//! ground truth for the closed-form classifier.
//!
//! The search assigns colors vertex by vertex over per-vertex domains
//! (bitmasks). Every 3-AP is materialized once and indexed by its member
//! vertices. Once two members of a triple carry distinct colors `a` and `b`,
//! the third member's domain shrinks to `{a, b}`; a singleton domain is
//! assigned immediately.
//!
//! Colors are interchangeable, so only colorings whose colors first appear
//! in increasing order along a fixed vertex order are explored. The search
//! first branches on where each new color first appears (which fixes a
//! prefix of the order to the older colors), and only then fills the
//! remaining vertices, smallest domain first.

use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classifier::{aw_tree_product, Rule};
use crate::coloring::{
    check_copy_structure, find_rainbow_3ap, for_each_3ap, Color, Coloring, StructureViolation,
};
use crate::graph::{all_pairs_distances, DistanceMatrix, Graph};
use crate::product::cartesian_product;
use crate::tree::{canonical_form, tree_catalog};

/// Upper limit on the palette; domains are `u64` bitmasks.
pub const MAX_COLORS: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has {n} vertices, budget allows {max}")]
    TooLarge { n: usize, max: usize },
    #[error("graph has {0} vertices; at least 3 are needed")]
    TooSmall(usize),
    #[error("palette size must be between 1 and {MAX_COLORS}, got {0}")]
    BadPalette(usize),
    #[error("search budget fields must be positive")]
    InvalidBudget,
    #[error("search for r = {r} ran out of budget after {} nodes", stats.nodes)]
    Inconclusive { r: usize, stats: SearchStats },
    #[error("search returned a coloring that fails re-verification")]
    Unsound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_time: Duration,
    pub max_vertices: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 100_000_000,
            max_time: Duration::from_secs(300),
            max_vertices: 64,
        }
    }
}

impl SearchBudget {
    pub fn new(
        max_nodes: u64,
        max_time: Duration,
        max_vertices: usize,
    ) -> Result<Self, OracleError> {
        if max_nodes == 0 || max_time.is_zero() || max_vertices == 0 {
            return Err(OracleError::InvalidBudget);
        }
        Ok(SearchBudget {
            max_nodes,
            max_time,
            max_vertices,
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "coloring", rename_all = "lowercase")]
pub enum OracleStatus {
    Found(Coloring),
    Exhausted,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleOutcome {
    #[serde(flatten)]
    pub status: OracleStatus,
    pub stats: SearchStats,
}

/// Every 3-AP of a host graph, plus the triples each vertex belongs to.
#[derive(Clone, Debug)]
pub struct ApIndex {
    n: usize,
    triples: Vec<[u32; 3]>,
    watch: Vec<Vec<u32>>,
    degree: Vec<usize>,
    dm: DistanceMatrix,
}

impl ApIndex {
    pub fn new(g: &Graph) -> Self {
        let dm = all_pairs_distances(g);
        let n = g.order();
        let mut triples = Vec::new();
        let mut watch = vec![Vec::new(); n];
        let _ = for_each_3ap::<_, (), _>(&dm, |t| {
            let id = triples.len() as u32;
            triples.push([t.x as u32, t.y as u32, t.z as u32]);
            for v in [t.x, t.y, t.z] {
                watch[v].push(id);
            }
            ControlFlow::Continue(())
        });
        let degree = (0..n).map(|v| g.degree(v)).collect();
        ApIndex {
            n,
            triples,
            watch,
            degree,
            dm,
        }
    }

    pub fn triple_count(&self) -> usize {
        self.triples.len()
    }

    pub fn distances(&self) -> &DistanceMatrix {
        &self.dm
    }
}

enum Undo {
    Domain(usize, u64),
    Assign(usize),
}

struct Stop;

struct Search<'a> {
    index: &'a ApIndex,
    r: usize,
    order: Vec<usize>,
    rank: Vec<usize>,
    color: Vec<Option<Color>>,
    domain: Vec<u64>,
    trail: Vec<Undo>,
    queue: Vec<usize>,
    nodes: u64,
    max_nodes: u64,
    deadline: Instant,
}

fn bit(c: Color) -> u64 {
    1u64 << c
}

fn below(m: usize) -> u64 {
    if m >= 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

impl<'a> Search<'a> {
    fn new(index: &'a ApIndex, r: usize, max_nodes: u64, deadline: Instant) -> Self {
        let n = index.n;
        // Fixed order: descending degree, ties by id.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(index.degree[v]), v));
        let mut rank = vec![0; n];
        for (pos, &v) in order.iter().enumerate() {
            rank[v] = pos;
        }
        Search {
            index,
            r,
            order,
            rank,
            color: vec![None; n],
            domain: vec![below(r); n],
            trail: Vec::new(),
            queue: Vec::new(),
            nodes: 0,
            max_nodes,
            deadline,
        }
    }

    fn tick(&mut self) -> Result<(), Stop> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Stop);
        }
        if self.nodes.is_multiple_of(1024) && Instant::now() >= self.deadline {
            return Err(Stop);
        }
        Ok(())
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().expect("trail above mark") {
                Undo::Domain(v, old) => self.domain[v] = old,
                Undo::Assign(v) => self.color[v] = None,
            }
        }
    }

    /// Intersect a domain; assigns on a singleton. False on a wipe-out.
    fn restrict(&mut self, v: usize, mask: u64) -> bool {
        let old = self.domain[v];
        let new = old & mask;
        if new == old {
            return true;
        }
        if new == 0 {
            return false;
        }
        self.trail.push(Undo::Domain(v, old));
        self.domain[v] = new;
        if new.is_power_of_two() && self.color[v].is_none() {
            self.color[v] = Some(new.trailing_zeros());
            self.trail.push(Undo::Assign(v));
            self.queue.push(v);
        }
        true
    }

    fn propagate(&mut self) -> bool {
        while let Some(v) = self.queue.pop() {
            let a = self.color[v].expect("queued vertices are assigned");
            for &t in &self.index.watch[v] {
                let [x, y, z] = self.index.triples[t as usize];
                let (p, q) = match v as u32 {
                    w if w == x => (y, z),
                    w if w == y => (x, z),
                    _ => (x, y),
                };
                let (p, q) = (p as usize, q as usize);
                let ok = match (self.color[p], self.color[q]) {
                    (Some(b), Some(c)) => a == b || b == c || a == c,
                    (Some(b), None) if b != a => self.restrict(q, bit(a) | bit(b)),
                    (None, Some(c)) if c != a => self.restrict(p, bit(a) | bit(c)),
                    _ => true,
                };
                if !ok {
                    self.queue.clear();
                    return false;
                }
            }
        }
        true
    }

    fn assign(&mut self, v: usize, c: Color) -> bool {
        self.restrict(v, bit(c)) && {
            if self.color[v].is_none() {
                // Domain was already {c}; restrict did not record an assignment.
                self.color[v] = Some(c);
                self.trail.push(Undo::Assign(v));
                self.queue.push(v);
            }
            self.propagate()
        }
    }

    fn restrict_and_propagate(&mut self, v: usize, mask: u64) -> bool {
        self.restrict(v, mask) && self.propagate()
    }

    fn run(&mut self) -> Result<bool, Stop> {
        let n = self.index.n;
        if self.r == 0 || self.r > n {
            return Ok(false);
        }
        self.tick()?;
        if !self.assign(self.order[0], 0) {
            return Ok(false);
        }
        self.place(1, 0)
    }

    /// Colors `0..m` are placed, color `m-1` first appearing at position `f`.
    fn place(&mut self, m: usize, f: usize) -> Result<bool, Stop> {
        if m == self.r {
            return self.fill();
        }
        let n = self.index.n;
        let outer = self.trail.len();
        for p in f + 1..=n - (self.r - m) {
            self.tick()?;
            let mark = self.trail.len();
            if self.assign(self.order[p], m as Color) && self.place(m + 1, p)? {
                return Ok(true);
            }
            self.undo(mark);
            // From here on, color m appears after position p.
            if !self.restrict_and_propagate(self.order[p], below(m)) {
                break;
            }
        }
        self.undo(outer);
        Ok(false)
    }

    fn fill(&mut self) -> Result<bool, Stop> {
        let pick = (0..self.index.n)
            .filter(|&v| self.color[v].is_none())
            .min_by_key(|&v| {
                (
                    self.domain[v].count_ones(),
                    std::cmp::Reverse(self.index.watch[v].len()),
                    self.rank[v],
                )
            });
        let Some(v) = pick else { return Ok(true) };
        let mut options = self.domain[v];
        while options != 0 {
            let c = options.trailing_zeros();
            options &= options - 1;
            self.tick()?;
            let mark = self.trail.len();
            if self.assign(v, c) && self.fill()? {
                return Ok(true);
            }
            self.undo(mark);
        }
        Ok(false)
    }

    fn coloring(&self) -> Coloring {
        let colors = self
            .color
            .iter()
            .map(|c| c.expect("complete assignment"))
            .collect();
        Coloring::new(self.r, colors).expect("colors are below r")
    }
}

fn check_graph(g: &Graph, budget: &SearchBudget) -> Result<(), OracleError> {
    if budget.max_nodes == 0 || budget.max_time.is_zero() || budget.max_vertices == 0 {
        return Err(OracleError::InvalidBudget);
    }
    if g.order() > budget.max_vertices {
        return Err(OracleError::TooLarge {
            n: g.order(),
            max: budget.max_vertices,
        });
    }
    if !g.is_connected() {
        return Err(OracleError::Disconnected);
    }
    Ok(())
}

fn search_with(
    index: &ApIndex,
    r: usize,
    max_nodes: u64,
    deadline: Instant,
) -> Result<OracleOutcome, OracleError> {
    if r == 0 || r > MAX_COLORS {
        return Err(OracleError::BadPalette(r));
    }
    let started = Instant::now();
    let mut search = Search::new(index, r, max_nodes, deadline);
    let result = search.run();
    let stats = SearchStats {
        nodes: search.nodes,
        millis: started.elapsed().as_millis() as u64,
    };
    let status = match result {
        Ok(true) => {
            let c = search.coloring();
            if !c.is_exact() || find_rainbow_3ap(&index.dm, &c).is_some() {
                return Err(OracleError::Unsound);
            }
            OracleStatus::Found(c)
        }
        Ok(false) => OracleStatus::Exhausted,
        Err(Stop) => OracleStatus::Inconclusive,
    };
    log::debug!("r = {r}: {status:?} after {} nodes", stats.nodes);
    Ok(OracleOutcome { status, stats })
}

/// Complete search for an exact rainbow-free `r`-coloring of a connected
/// graph. `Exhausted` means none exists; a spent budget gives
/// `Inconclusive`, never a guess.
pub fn exists_rainbow_free_exact_coloring(
    g: &Graph,
    r: usize,
    budget: &SearchBudget,
) -> Result<OracleOutcome, OracleError> {
    check_graph(g, budget)?;
    let index = ApIndex::new(g);
    search_with(
        &index,
        r,
        budget.max_nodes,
        Instant::now() + budget.max_time,
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRun {
    pub r: usize,
    #[serde(flatten)]
    pub outcome: OracleOutcome,
}

/// `aw(G,3)` with the searches that established it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleAw {
    pub aw: usize,
    /// A rainbow-free exact `(aw-1)`-coloring.
    pub witness: Coloring,
    pub runs: Vec<OracleRun>,
    pub stats: SearchStats,
}

impl OracleAw {
    /// The rainbow-free exact coloring found at palette `r`, if that search
    /// succeeded.
    pub fn found(&self, r: usize) -> Option<&Coloring> {
        self.runs
            .iter()
            .find(|run| run.r == r)
            .and_then(|run| match &run.outcome.status {
                OracleStatus::Found(c) => Some(c),
                _ => None,
            })
    }
}

/// Raise `r` from 3 until no rainbow-free exact `r`-coloring exists; that `r`
/// is `aw(G,3)`. Merging two color classes never creates a rainbow triple,
/// so the first exhausted palette is the answer. The budget covers all runs
/// together.
pub fn brute_force_aw3(g: &Graph, budget: &SearchBudget) -> Result<OracleAw, OracleError> {
    check_graph(g, budget)?;
    let n = g.order();
    if n < 3 {
        return Err(OracleError::TooSmall(n));
    }
    let index = ApIndex::new(g);
    let deadline = Instant::now() + budget.max_time;
    let started = Instant::now();
    // Any exact 2-coloring is rainbow-free.
    let mut witness =
        Coloring::new(2, (0..n).map(|v| Color::from(v != 0)).collect()).expect("two colors");
    let mut runs = Vec::new();
    let mut nodes = 0u64;
    for r in 3..=n.min(MAX_COLORS) {
        let outcome = search_with(
            &index,
            r,
            budget.max_nodes.saturating_sub(nodes).max(1),
            deadline,
        )?;
        nodes += outcome.stats.nodes;
        let status = outcome.status.clone();
        runs.push(OracleRun { r, outcome });
        match status {
            OracleStatus::Found(c) => witness = c,
            OracleStatus::Exhausted => {
                let stats = SearchStats {
                    nodes,
                    millis: started.elapsed().as_millis() as u64,
                };
                return Ok(OracleAw {
                    aw: r,
                    witness,
                    runs,
                    stats,
                });
            }
            OracleStatus::Inconclusive => {
                let stats = SearchStats {
                    nodes,
                    millis: started.elapsed().as_millis() as u64,
                };
                return Err(OracleError::Inconclusive { r, stats });
            }
        }
    }
    // An exact n-coloring of a connected graph on n ≥ 3 vertices always has a
    // rainbow path x-y-z, so the loop above always exhausts.
    unreachable!("exact {n}-coloring found rainbow-free")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrosscheckStatus {
    Agree,
    Disagree,
    Inconclusive,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifierSide {
    pub aw: Option<u32>,
    pub rule: Option<Rule>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSide {
    pub aw: Option<usize>,
    pub inconclusive: bool,
    pub nodes: u64,
    pub ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// One line of a crosscheck sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosscheckRecord {
    pub t1: String,
    pub t2: String,
    pub classifier: ClassifierSide,
    pub oracle: OracleSide,
    pub agree: bool,
    pub status: CrosscheckStatus,
    /// Copy-structure facts checked on the oracle's rainbow-free exact
    /// 3-coloring, when one was found.
    pub structure_checked: bool,
    pub structure_violations: Vec<StructureViolation>,
}

/// Run the classifier and the oracle on `T□T'` and compare.
pub fn crosscheck_pair(t: &Graph, t2: &Graph, budget: &SearchBudget) -> CrosscheckRecord {
    let classified = aw_tree_product(t, t2);
    let classifier = match &classified {
        Ok(res) => ClassifierSide {
            aw: Some(res.value),
            rule: Some(res.rule),
            error: None,
        },
        Err(e) => ClassifierSide {
            aw: None,
            rule: None,
            error: Some(e.to_string()),
        },
    };

    let mut structure_checked = false;
    let mut structure_violations = Vec::new();
    let oracle = match cartesian_product(t, t2) {
        Err(e) => OracleSide {
            aw: None,
            inconclusive: false,
            nodes: 0,
            ms: 0,
            error: Some(e.to_string()),
        },
        Ok(pg) => match brute_force_aw3(pg.graph(), budget) {
            Ok(res) => {
                if let Some(c) = res.found(3) {
                    structure_checked = true;
                    structure_violations = check_copy_structure(&pg, c).expect("sizes match");
                }
                OracleSide {
                    aw: Some(res.aw),
                    inconclusive: false,
                    nodes: res.stats.nodes,
                    ms: res.stats.millis,
                    error: None,
                }
            }
            Err(OracleError::Inconclusive { stats, .. }) => OracleSide {
                aw: None,
                inconclusive: true,
                nodes: stats.nodes,
                ms: stats.millis,
                error: None,
            },
            Err(e) => OracleSide {
                aw: None,
                inconclusive: false,
                nodes: 0,
                ms: 0,
                error: Some(e.to_string()),
            },
        },
    };

    let status = match (classifier.aw, oracle.aw) {
        _ if oracle.inconclusive => CrosscheckStatus::Inconclusive,
        (Some(a), Some(b)) if a as usize == b => CrosscheckStatus::Agree,
        (Some(_), Some(_)) => CrosscheckStatus::Disagree,
        _ => CrosscheckStatus::Error,
    };
    CrosscheckRecord {
        t1: canonical_form(t),
        t2: canonical_form(t2),
        classifier,
        oracle,
        agree: status == CrosscheckStatus::Agree,
        status,
        structure_checked,
        structure_violations,
    }
}

/// Every unordered pair of nontrivial trees (up to isomorphism) with at most
/// `max_factor` vertices each, in catalog order.
pub fn sweep_pairs(max_factor: usize) -> Vec<(Graph, Graph)> {
    let catalog: Vec<Graph> = tree_catalog(max_factor)
        .expect("catalog bound follows max_factor")
        .into_iter()
        .filter(|t| t.order() >= 2)
        .collect();
    let mut pairs = Vec::new();
    for (a, t) in catalog.iter().enumerate() {
        for t2 in &catalog[a..] {
            pairs.push((t.clone(), t2.clone()));
        }
    }
    pairs
}

/// Crosscheck every pair from [`sweep_pairs`] on the current rayon pool.
/// Records come back in pair order.
pub fn crosscheck_sweep(max_factor: usize, budget: &SearchBudget) -> Vec<CrosscheckRecord> {
    sweep_pairs(max_factor)
        .par_iter()
        .map(|(t, t2)| crosscheck_pair(t, t2, budget))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn product(m: usize, n: usize) -> Graph {
        cartesian_product(&Graph::path(m), &Graph::path(n))
            .unwrap()
            .graph()
            .clone()
    }

    fn budget() -> SearchBudget {
        SearchBudget::default()
    }

    #[test]
    fn small_grid_outcomes() {
        let g = product(2, 4);
        let out = exists_rainbow_free_exact_coloring(&g, 3, &budget()).unwrap();
        assert_eq!(out.status, OracleStatus::Exhausted);

        let g = product(2, 3);
        let out = exists_rainbow_free_exact_coloring(&g, 3, &budget()).unwrap();
        let OracleStatus::Found(c) = out.status else {
            panic!("expected a coloring")
        };
        assert!(c.is_exact());
        assert_eq!(find_rainbow_3ap(&all_pairs_distances(&g), &c), None);
    }

    #[test]
    fn two_colors_always_found() {
        for g in [product(3, 3), Graph::cycle(5), Graph::star(4)] {
            let out = exists_rainbow_free_exact_coloring(&g, 2, &budget()).unwrap();
            assert!(matches!(out.status, OracleStatus::Found(_)));
        }
    }

    #[test]
    fn palette_larger_than_graph_is_exhausted() {
        let out = exists_rainbow_free_exact_coloring(&Graph::path(2), 3, &budget()).unwrap();
        assert_eq!(out.status, OracleStatus::Exhausted);
    }

    #[test]
    fn aw_of_grids() {
        assert_eq!(brute_force_aw3(&product(3, 3), &budget()).unwrap().aw, 3);
        let res = brute_force_aw3(&product(4, 4), &budget()).unwrap();
        assert_eq!(res.aw, 4);
        assert_eq!(res.witness.palette(), 3);
        assert!(res.found(3).is_some());
    }

    #[test]
    fn rejects_bad_inputs() {
        let split = Graph::path(3).disjoint_union(&Graph::path(3));
        assert_eq!(
            brute_force_aw3(&split, &budget()).unwrap_err(),
            OracleError::Disconnected
        );
        assert_eq!(
            brute_force_aw3(&Graph::path(2), &budget()).unwrap_err(),
            OracleError::TooSmall(2)
        );
        let tiny = SearchBudget {
            max_vertices: 4,
            ..budget()
        };
        assert_eq!(
            brute_force_aw3(&Graph::path(5), &tiny).unwrap_err(),
            OracleError::TooLarge { n: 5, max: 4 }
        );
        assert_eq!(
            SearchBudget::new(0, Duration::from_secs(1), 3),
            Err(OracleError::InvalidBudget)
        );
        assert_eq!(
            exists_rainbow_free_exact_coloring(&Graph::path(3), 0, &budget()).unwrap_err(),
            OracleError::BadPalette(0)
        );
    }

    #[test]
    fn exhausted_budget_is_inconclusive() {
        let tight = SearchBudget {
            max_nodes: 5,
            ..budget()
        };
        let out = exists_rainbow_free_exact_coloring(&product(4, 4), 4, &tight).unwrap();
        assert_eq!(out.status, OracleStatus::Inconclusive);
        assert!(matches!(
            brute_force_aw3(&product(4, 4), &tight),
            Err(OracleError::Inconclusive { r: 3, .. })
        ));
    }

    #[test]
    fn deterministic_statistics() {
        let g = product(3, 4);
        let a = exists_rainbow_free_exact_coloring(&g, 3, &budget()).unwrap();
        let b = exists_rainbow_free_exact_coloring(&g, 3, &budget()).unwrap();
        assert_eq!(a.status, b.status);
        assert_eq!(a.stats.nodes, b.stats.nodes);
    }

    #[test]
    fn crosscheck_small_pairs() {
        let rec = crosscheck_pair(&Graph::path(2), &Graph::path(4), &budget());
        assert_eq!(rec.status, CrosscheckStatus::Agree);
        assert_eq!(rec.oracle.aw, Some(3));
        assert_eq!(rec.classifier.rule, Some(Rule::P2Factor));

        let rec = crosscheck_pair(&Graph::path(5), &Graph::path(5), &budget());
        assert_eq!(rec.status, CrosscheckStatus::Agree);
        assert_eq!(rec.oracle.aw, Some(4));
        assert!(rec.structure_checked);
        assert!(rec.structure_violations.is_empty());
    }

    #[test]
    fn sweep_pair_counts() {
        // Nontrivial trees on ≤ 4 vertices: P2, P3, P4, K_{1,3}.
        assert_eq!(sweep_pairs(4).len(), 10);
        assert_eq!(sweep_pairs(5).len(), 28);
    }
}
