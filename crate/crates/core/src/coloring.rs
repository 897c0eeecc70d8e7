//! Colorings, 3-term arithmetic progressions and the red/blue/green
//! construction for products of two non-3-peripheral trees.
//!
//! A 3-AP is a triple `(x, y, z)` with `d(x,y) = d(y,z) = d ≥ 1`. Only the two
//! consecutive distances are constrained; `d(x,z)` may be anything. The
//! triples `(x,y,z)` and `(z,y,x)` are the same object and are reported once
//! with `x < z`. Triples with `x = z` are skipped since they can never be
//! rainbow.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{all_pairs_distances, Graph, Metric};
use crate::product::{Factor, ProductGraph};
use crate::tree::{is_n_peripheral, tree_minus, Parity};

pub type Color = u32;

pub const RED: Color = 0;
pub const BLUE: Color = 1;
pub const GREEN: Color = 2;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("vertex {vertex} has color {color} outside the palette of size {r}")]
    ColorOutOfPalette {
        vertex: usize,
        color: Color,
        r: usize,
    },
    #[error("coloring covers {got} vertices, graph has {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("colors {0} and {1} cannot be merged")]
    BadMerge(Color, Color),
    #[error("only {0} colors are present, at least 3 are needed")]
    TooFewColors(usize),
    #[error("{0:?} factor is not a tree")]
    NotATree(Factor),
    #[error("{0:?} factor is trivial")]
    TrivialFactor(Factor),
    #[error("{0:?} factor is 3-peripheral")]
    ThreePeripheralFactor(Factor),
    #[error("product diameter {0} is odd")]
    OddProductDiameter(u32),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("vertex {0} matches both the red and the blue rule")]
    RuleOverlap(usize),
}

/// Total assignment of colors `0..r` to vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawColoring")]
pub struct Coloring {
    r: usize,
    colors: Vec<Color>,
}

#[derive(Deserialize)]
struct RawColoring {
    r: usize,
    colors: Vec<Color>,
}

impl TryFrom<RawColoring> for Coloring {
    type Error = ColoringError;

    fn try_from(raw: RawColoring) -> Result<Self, Self::Error> {
        Coloring::new(raw.r, raw.colors)
    }
}

impl Coloring {
    pub fn new(r: usize, colors: Vec<Color>) -> Result<Self, ColoringError> {
        if let Some((vertex, &color)) = colors.iter().enumerate().find(|(_, &c)| c as usize >= r) {
            return Err(ColoringError::ColorOutOfPalette { vertex, color, r });
        }
        Ok(Coloring { r, colors })
    }

    pub fn uniform(n: usize, r: usize, color: Color) -> Result<Self, ColoringError> {
        Coloring::new(r, vec![color; n])
    }

    pub fn palette(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn color(&self, v: usize) -> Color {
        self.colors[v]
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn set(&mut self, v: usize, c: Color) -> Result<(), ColoringError> {
        if c as usize >= self.r {
            return Err(ColoringError::ColorOutOfPalette {
                vertex: v,
                color: c,
                r: self.r,
            });
        }
        self.colors[v] = c;
        Ok(())
    }

    /// Number of distinct colors actually used.
    pub fn used_colors(&self) -> usize {
        self.colors.iter().collect::<BTreeSet<_>>().len()
    }

    /// Surjective onto `0..r`.
    pub fn is_exact(&self) -> bool {
        self.used_colors() == self.r
    }

    /// Recolor class `from` as `into`, then shift colors above `from` down so
    /// the palette stays `0..r-1`.
    pub fn merge(&self, into: Color, from: Color) -> Result<Coloring, ColoringError> {
        let r = self.r as Color;
        if into == from || into >= r || from >= r {
            return Err(ColoringError::BadMerge(into, from));
        }
        let target = if into > from { into - 1 } else { into };
        let colors = self
            .colors
            .iter()
            .map(|&c| match c {
                c if c == from => target,
                c if c > from => c - 1,
                c => c,
            })
            .collect();
        Ok(Coloring {
            r: self.r - 1,
            colors,
        })
    }

    fn check_size(&self, n: usize) -> Result<(), ColoringError> {
        if self.len() == n {
            Ok(())
        } else {
            Err(ColoringError::SizeMismatch {
                expected: n,
                got: self.len(),
            })
        }
    }
}

/// A 3-AP `(x, y, z)` with midpoint `y`, common difference `d` and `x < z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct APTriple {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub d: u32,
}

/// Visit every 3-AP once: midpoint-major, then `(x, z)` lexicographic.
pub fn for_each_3ap<M, B, F>(m: &M, mut visit: F) -> ControlFlow<B>
where
    M: Metric + ?Sized,
    F: FnMut(APTriple) -> ControlFlow<B>,
{
    let n = m.order();
    let mut row: Vec<Option<u32>> = vec![None; n];
    let mut buckets: Vec<Vec<usize>> = Vec::new();
    for y in 0..n {
        buckets.iter_mut().for_each(Vec::clear);
        for (v, slot) in row.iter_mut().enumerate() {
            *slot = m.dist(y, v);
            if let Some(d) = *slot {
                let d = d as usize;
                if d > 0 {
                    if buckets.len() <= d {
                        buckets.resize_with(d + 1, Vec::new);
                    }
                    buckets[d].push(v);
                }
            }
        }
        for x in 0..n {
            let Some(d) = row[x] else { continue };
            if d == 0 {
                continue;
            }
            let bucket = &buckets[d as usize];
            let start = bucket.partition_point(|&z| z <= x);
            for &z in &bucket[start..] {
                visit(APTriple { x, y, z, d })?;
            }
        }
    }
    ControlFlow::Continue(())
}

pub fn all_3aps<M: Metric + ?Sized>(m: &M) -> Vec<APTriple> {
    let mut out = Vec::new();
    let _ = for_each_3ap::<_, (), _>(m, |t| {
        out.push(t);
        ControlFlow::Continue(())
    });
    out
}

fn is_rainbow(c: &Coloring, t: &APTriple) -> bool {
    let (a, b, d) = (c.color(t.x), c.color(t.y), c.color(t.z));
    a != b && b != d && a != d
}

/// First rainbow 3-AP in enumeration order, if any.
pub fn find_rainbow_3ap<M: Metric + ?Sized>(m: &M, c: &Coloring) -> Option<APTriple> {
    assert_eq!(c.len(), m.order(), "coloring does not cover the graph");
    if c.palette() < 3 {
        return None;
    }
    match for_each_3ap(m, |t| {
        if is_rainbow(c, &t) {
            ControlFlow::Break(t)
        } else {
            ControlFlow::Continue(())
        }
    }) {
        ControlFlow::Break(t) => Some(t),
        ControlFlow::Continue(()) => None,
    }
}

/// Anchor vertices for the red/blue/green construction.
///
/// `(u1, w1)` is the corner the blue rule measures from, `(j, k)` the
/// opposite corner for the red rule. `u1` and `w1` are peripheral with
/// non-3-peripheral minus-transforms; `j` and `k` sit at factor diameter
/// from them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RbgAnchors {
    pub u1: usize,
    pub w1: usize,
    pub j: usize,
    pub k: usize,
}

/// Lexicographically least witness `(u1, w1, j, k)`, or `None` when one of
/// the factors has no peripheral vertex with a non-3-peripheral
/// minus-transform.
pub fn find_rbg_anchors(t: &Graph, t2: &Graph) -> Result<Option<RbgAnchors>, ColoringError> {
    let first = factor_anchor(t, Factor::First)?;
    let second = factor_anchor(t2, Factor::Second)?;
    let (d1, d2) = (
        all_pairs_distances(t).diameter(),
        all_pairs_distances(t2).diameter(),
    );
    if Parity::of(d1 + d2) == Parity::Odd {
        return Err(ColoringError::OddProductDiameter(d1 + d2));
    }
    Ok(match (first, second) {
        (Some((u1, j)), Some((w1, k))) => Some(RbgAnchors { u1, w1, j, k }),
        _ => None,
    })
}

fn factor_anchor(t: &Graph, which: Factor) -> Result<Option<(usize, usize)>, ColoringError> {
    if !t.is_tree() {
        return Err(ColoringError::NotATree(which));
    }
    if t.order() < 2 {
        return Err(ColoringError::TrivialFactor(which));
    }
    let dm = all_pairs_distances(t);
    if is_n_peripheral(&dm, 3)
        .expect("trees are connected")
        .is_some()
    {
        return Err(ColoringError::ThreePeripheralFactor(which));
    }
    let diam = dm.diameter();
    for v in dm.peripheral() {
        let minus = tree_minus(t, v).expect("v is peripheral in a nontrivial tree");
        let minus_dm = all_pairs_distances(&minus.graph);
        if is_n_peripheral(&minus_dm, 3)
            .expect("T_{v^-} is connected")
            .is_none()
        {
            let far = (0..t.order())
                .find(|&u| dm.get(v, u) == Some(diam))
                .expect("peripheral vertex has a diametral partner");
            return Ok(Some((v, far)));
        }
    }
    Ok(None)
}

fn anchors(pg: &ProductGraph, w: &RbgAnchors) -> Result<(usize, usize), ColoringError> {
    let (n1, n2) = pg.factor_orders();
    if w.u1 >= n1 || w.j >= n1 || w.w1 >= n2 || w.k >= n2 {
        return Err(ColoringError::InvalidWitness(format!(
            "{w:?} out of range for {n1}x{n2}"
        )));
    }
    let (g, h) = (pg.first_distances(), pg.second_distances());
    if g.get(w.u1, w.j) != Some(g.diameter()) || h.get(w.w1, w.k) != Some(h.diameter()) {
        return Err(ColoringError::InvalidWitness(format!(
            "{w:?} does not realize the product diameter"
        )));
    }
    if pg.diameter() < 2 {
        return Err(ColoringError::InvalidWitness(
            "product diameter below 2".into(),
        ));
    }
    Ok((pg.flat(w.u1, w.w1), pg.flat(w.j, w.k)))
}

/// Blue at distance `diam-1` from `(u1,w1)`, red at distance `diam` from
/// `(j,k)`, green elsewhere. A vertex matching both rules is reported as
/// [`ColoringError::RuleOverlap`].
pub fn rbg_coloring(pg: &ProductGraph, w: &RbgAnchors) -> Result<Coloring, ColoringError> {
    let (corner, opposite) = anchors(pg, w)?;
    let diam = pg.diameter();
    let mut colors = Vec::with_capacity(pg.order());
    for v in 0..pg.order() {
        let blue = pg.dist(v, corner) == Some(diam - 1);
        let red = pg.dist(v, opposite) == Some(diam);
        colors.push(match (red, blue) {
            (true, true) => return Err(ColoringError::RuleOverlap(v)),
            (true, false) => RED,
            (false, true) => BLUE,
            (false, false) => GREEN,
        });
    }
    Coloring::new(3, colors)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "at")]
pub enum Counterexample {
    Vertex(usize),
    Pair(usize, usize),
    Triple(APTriple),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
}

impl PropertyCheck {
    fn from_first(found: Option<Counterexample>) -> Self {
        PropertyCheck {
            passed: found.is_none(),
            counterexample: found,
        }
    }
}

/// Pass/fail for each property of the red/blue/green coloring, plus a plain
/// rainbow-freeness check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RbgReport {
    /// (i) no vertex satisfies both the red and the blue rule.
    pub well_defined: PropertyCheck,
    /// (ii) every red–blue pair is at distance diam-1.
    pub red_blue_distance: PropertyCheck,
    /// (iii) every vertex at distance diam-1 from a red vertex is blue.
    pub red_neighborhood_blue: PropertyCheck,
    /// (iv) every rainbow 3-AP has a blue midpoint.
    pub rainbow_midpoint_blue: PropertyCheck,
    pub rainbow_free: PropertyCheck,
}

impl RbgReport {
    pub fn all_pass(&self) -> bool {
        [
            self.well_defined,
            self.red_blue_distance,
            self.red_neighborhood_blue,
            self.rainbow_midpoint_blue,
            self.rainbow_free,
        ]
        .iter()
        .all(|p| p.passed)
    }
}

pub fn verify_rbg_properties(
    pg: &ProductGraph,
    c: &Coloring,
    w: &RbgAnchors,
) -> Result<RbgReport, ColoringError> {
    c.check_size(pg.order())?;
    let (corner, opposite) = anchors(pg, w)?;
    let diam = pg.diameter();
    let n = pg.order();
    let reds: Vec<usize> = (0..n).filter(|&v| c.color(v) == RED).collect();
    let blues: Vec<usize> = (0..n).filter(|&v| c.color(v) == BLUE).collect();

    let well_defined = (0..n)
        .find(|&v| pg.dist(v, corner) == Some(diam - 1) && pg.dist(v, opposite) == Some(diam))
        .map(Counterexample::Vertex);

    let red_blue = reds
        .iter()
        .flat_map(|&x| blues.iter().map(move |&y| (x, y)))
        .find(|&(x, y)| pg.dist(x, y) != Some(diam - 1))
        .map(|(x, y)| Counterexample::Pair(x, y));

    let red_nbhd = reds
        .iter()
        .flat_map(|&x| (0..n).map(move |y| (x, y)))
        .find(|&(x, y)| pg.dist(x, y) == Some(diam - 1) && c.color(y) != BLUE)
        .map(|(x, y)| Counterexample::Pair(x, y));

    let bad_midpoint = match for_each_3ap(pg, |t| {
        if is_rainbow(c, &t) && c.color(t.y) != BLUE {
            ControlFlow::Break(t)
        } else {
            ControlFlow::Continue(())
        }
    }) {
        ControlFlow::Break(t) => Some(Counterexample::Triple(t)),
        ControlFlow::Continue(()) => None,
    };

    let rainbow = find_rainbow_3ap(pg, c).map(Counterexample::Triple);

    Ok(RbgReport {
        well_defined: PropertyCheck::from_first(well_defined),
        red_blue_distance: PropertyCheck::from_first(red_blue),
        red_neighborhood_blue: PropertyCheck::from_first(red_nbhd),
        rainbow_midpoint_blue: PropertyCheck::from_first(bad_midpoint),
        rainbow_free: PropertyCheck::from_first(rainbow),
    })
}

/// A shortest geodesic whose vertices carry at least three colors.
///
/// Any such minimal geodesic has uniquely colored endpoints and a
/// monochromatic interior in a third color, so the search runs over endpoint
/// pairs by increasing distance and asks whether a geodesic between them has
/// an interior in one color. Returns `None` when no geodesic is trichromatic
/// (possible only when the graph has triangles).
pub fn shortest_trichromatic_path<M: Metric + ?Sized>(
    g: &Graph,
    m: &M,
    c: &Coloring,
) -> Result<Option<Vec<usize>>, ColoringError> {
    c.check_size(g.order())?;
    let used = c.used_colors();
    if used < 3 {
        return Err(ColoringError::TooFewColors(used));
    }
    let n = g.order();
    let present: BTreeSet<Color> = c.colors().iter().copied().collect();
    let mut pairs: Vec<(u32, usize, usize)> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if c.color(a) == c.color(b) {
                continue;
            }
            if let Some(d) = m.dist(a, b) {
                if d >= 2 {
                    pairs.push((d, a, b));
                }
            }
        }
    }
    pairs.sort_unstable();
    for (len, a, b) in pairs {
        for &gamma in present
            .iter()
            .filter(|&&x| x != c.color(a) && x != c.color(b))
        {
            if let Some(path) = monochrome_geodesic(g, m, c, a, b, len, gamma) {
                return Ok(Some(path));
            }
        }
    }
    Ok(None)
}

fn monochrome_geodesic<M: Metric + ?Sized>(
    g: &Graph,
    m: &M,
    c: &Coloring,
    a: usize,
    b: usize,
    len: u32,
    gamma: Color,
) -> Option<Vec<usize>> {
    let n = g.order();
    let mut pred = vec![usize::MAX; n];
    let mut layer = vec![a];
    for step in 1..=len {
        let mut next = Vec::new();
        for &u in &layer {
            for &v in g.neighbors(u) {
                if pred[v] != usize::MAX || v == a {
                    continue;
                }
                let on_geodesic = m.dist(a, v) == Some(step) && m.dist(v, b) == Some(len - step);
                let allowed = if step == len {
                    v == b
                } else {
                    c.color(v) == gamma
                };
                if on_geodesic && allowed {
                    pred[v] = u;
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        layer = next;
    }
    let mut path = vec![b];
    while *path.last().expect("nonempty") != a {
        path.push(pred[*path.last().expect("nonempty")]);
    }
    path.reverse();
    Some(path)
}

/// Facts every rainbow-free exact coloring (r ≥ 3) of a product of connected
/// factors must satisfy, checked for copies of both factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum StructureViolation {
    /// A single copy carries three or more colors.
    CopyTooColorful {
        factor: Factor,
        index: usize,
        colors: usize,
    },
    /// Two copies indexed by adjacent vertices carry three or more colors.
    AdjacentCopiesTooColorful {
        factor: Factor,
        a: usize,
        b: usize,
        colors: usize,
    },
    /// No color appears in every copy.
    NoCommonColor { factor: Factor },
}

pub fn check_copy_structure(
    pg: &ProductGraph,
    c: &Coloring,
) -> Result<Vec<StructureViolation>, ColoringError> {
    c.check_size(pg.order())?;
    let mut out = Vec::new();
    for factor in [Factor::First, Factor::Second] {
        let index_dm = match factor {
            Factor::First => pg.second_distances(),
            Factor::Second => pg.first_distances(),
        };
        let copies: Vec<BTreeSet<Color>> = (0..index_dm.order())
            .map(|i| {
                let set = pg.copy_of_factor(factor, i).expect("index in range");
                set.iter().map(|v| c.color(v)).collect()
            })
            .collect();
        for (index, colors) in copies.iter().enumerate() {
            if colors.len() > 2 {
                out.push(StructureViolation::CopyTooColorful {
                    factor,
                    index,
                    colors: colors.len(),
                });
            }
        }
        // Needs at least three copies; with two, their union is the whole graph.
        if copies.len() >= 3 {
            for a in 0..copies.len() {
                for b in a + 1..copies.len() {
                    if index_dm.get(a, b) == Some(1) {
                        let union = copies[a].union(&copies[b]).count();
                        if union > 2 {
                            out.push(StructureViolation::AdjacentCopiesTooColorful {
                                factor,
                                a,
                                b,
                                colors: union,
                            });
                        }
                    }
                }
            }
        }
        let common = copies
            .iter()
            .skip(1)
            .fold(copies.first().cloned().unwrap_or_default(), |acc, s| {
                acc.intersection(s).copied().collect()
            });
        if common.is_empty() {
            out.push(StructureViolation::NoCommonColor { factor });
        }
    }
    Ok(out)
}
