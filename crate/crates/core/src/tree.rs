//! Peripherality of trees: n-peripheral witnesses, the minus/plus transforms,
//! the strongly/weakly non-3-peripheral classifier and free-tree enumeration.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{all_pairs_distances, DistanceMatrix, Graph, Subgraph};

/// Trees with more vertices than this are refused by [`enumerate_trees`].
pub const DEFAULT_ENUMERATION_BOUND: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("graph is not a tree")]
    NotATree,
    #[error("tree is trivial (a single vertex)")]
    Trivial,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex {0} is not peripheral")]
    NotPeripheral(usize),
    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("peripherality order must be at least 1")]
    ZeroOrder,
    #[error("enumeration of trees on {n} vertices exceeds the bound {bound}")]
    OverBound { n: usize, bound: usize },
}

/// Vertices pairwise at diameter distance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeripheralWitness {
    pub vertices: Vec<usize>,
}

/// Find `n` vertices that are pairwise at distance `diam`, searching only
/// among peripheral vertices.
pub fn is_n_peripheral(
    dm: &DistanceMatrix,
    n: usize,
) -> Result<Option<PeripheralWitness>, TreeError> {
    if n == 0 {
        return Err(TreeError::ZeroOrder);
    }
    if !dm.is_connected() {
        return Err(TreeError::Disconnected);
    }
    let diam = dm.diameter();
    let candidates = dm.peripheral();
    let mut chosen = Vec::with_capacity(n);
    if extend_clique(dm, diam, &candidates, 0, n, &mut chosen) {
        Ok(Some(PeripheralWitness { vertices: chosen }))
    } else {
        Ok(None)
    }
}

fn extend_clique(
    dm: &DistanceMatrix,
    diam: u32,
    candidates: &[usize],
    from: usize,
    target: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    if chosen.len() == target {
        return true;
    }
    for idx in from..candidates.len() {
        if candidates.len() - idx < target - chosen.len() {
            break;
        }
        let v = candidates[idx];
        if chosen.iter().all(|&u| dm.get(u, v) == Some(diam)) {
            chosen.push(v);
            if extend_clique(dm, diam, candidates, idx + 1, target, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

fn is_three_peripheral(g: &Graph) -> bool {
    let dm = all_pairs_distances(g);
    matches!(is_n_peripheral(&dm, 3), Ok(Some(_)))
}

/// `T_{v^-}`: drop every vertex at diameter distance from the peripheral
/// vertex `v`.
pub fn tree_minus(t: &Graph, v: usize) -> Result<Subgraph, TreeError> {
    let dm = all_pairs_distances(t);
    tree_minus_with(t, &dm, v)
}

pub(crate) fn tree_minus_with(
    t: &Graph,
    dm: &DistanceMatrix,
    v: usize,
) -> Result<Subgraph, TreeError> {
    if !t.is_tree() {
        return Err(TreeError::NotATree);
    }
    if t.order() == 1 {
        return Err(TreeError::Trivial);
    }
    if v >= t.order() {
        return Err(TreeError::VertexOutOfRange { v, n: t.order() });
    }
    let diam = dm.diameter();
    if dm.ecc(v) != diam {
        return Err(TreeError::NotPeripheral(v));
    }
    let keep: Vec<usize> = (0..t.order())
        .filter(|&u| dm.get(u, v) != Some(diam))
        .collect();
    Ok(t.induced_subgraph(&keep))
}

/// `T_{u^+}`: a new leaf (the last id) hung on `u`.
pub fn tree_plus(t: &Graph, u: usize) -> Result<Graph, TreeError> {
    let n = t.order();
    if u >= n {
        return Err(TreeError::VertexOutOfRange { v: u, n });
    }
    let edges = t.edges().chain(std::iter::once((u, n)));
    Ok(Graph::from_edges(n + 1, edges).expect("adding a fresh leaf keeps the graph simple"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TreeKind {
    Trivial,
    ThreePeripheral,
    StronglyNon3Peripheral,
    WeaklyNon3Peripheral,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Zero,
    Odd,
    Even,
}

impl Parity {
    pub fn of(diameter: u32) -> Parity {
        match diameter {
            0 => Parity::Zero,
            d if d % 2 == 1 => Parity::Odd,
            _ => Parity::Even,
        }
    }
}

/// Result of [`classify_tree`].
///
/// `witness` is the peripheral `v` with `T_{v^-}` non-3-peripheral for a
/// strongly tree of odd diameter, or the `u` with `T_{u^+}` 3-peripheral for
/// a weakly tree of even diameter. Other cases carry no witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeClass {
    pub kind: TreeKind,
    pub diameter: u32,
    pub parity: Parity,
    pub is_p2: bool,
    pub witness: Option<usize>,
}

pub fn classify_tree(t: &Graph) -> Result<TreeClass, TreeError> {
    if !t.is_tree() {
        return Err(TreeError::NotATree);
    }
    let dm = all_pairs_distances(t);
    let diameter = dm.diameter();
    let parity = Parity::of(diameter);
    let is_p2 = t.order() == 2;
    let class = |kind, witness| TreeClass {
        kind,
        diameter,
        parity,
        is_p2,
        witness,
    };

    if t.order() == 1 {
        return Ok(class(TreeKind::Trivial, None));
    }
    if is_n_peripheral(&dm, 3)?.is_some() {
        return Ok(class(TreeKind::ThreePeripheral, None));
    }

    let peripheral = dm.peripheral();
    if parity == Parity::Odd {
        // Strongly iff some peripheral vertex leaves a non-3-peripheral T_{v^-}.
        for &v in &peripheral {
            let minus = tree_minus_with(t, &dm, v)?;
            if !is_three_peripheral(&minus.graph) {
                return Ok(class(TreeKind::StronglyNon3Peripheral, Some(v)));
            }
        }
        Ok(class(TreeKind::WeaklyNon3Peripheral, None))
    } else {
        // Weakly iff some T_{u^+} is 3-peripheral. Such a u is necessarily at
        // distance diam-1 from every peripheral vertex, so only those are tried.
        let candidates = (0..t.order()).filter(|&u| {
            peripheral
                .iter()
                .all(|&v| dm.get(u, v) == Some(diameter - 1))
        });
        for u in candidates {
            let plus = tree_plus(t, u)?;
            if is_three_peripheral(&plus) {
                return Ok(class(TreeKind::WeaklyNon3Peripheral, Some(u)));
            }
        }
        Ok(class(TreeKind::StronglyNon3Peripheral, None))
    }
}

/// Canonical string for a free tree: AHU encoding rooted at the center, or
/// the sorted pair of half-encodings when the center is an edge.
///
/// Two trees get the same string iff they are isomorphic. The graph must be
/// a tree (or empty, which encodes as `""`).
pub fn canonical_form(t: &Graph) -> String {
    if t.order() == 0 {
        return String::new();
    }
    let dm = all_pairs_distances(t);
    let centers: Vec<usize> = (0..t.order())
        .filter(|&v| dm.ecc(v) == dm.radius())
        .collect();
    match centers.as_slice() {
        [c] => rooted_code(t, *c, None),
        [a, b] => {
            let x = rooted_code(t, *a, Some(*b));
            let y = rooted_code(t, *b, Some(*a));
            if x <= y {
                x + &y
            } else {
                y + &x
            }
        }
        _ => panic!("canonical_form requires a tree"),
    }
}

fn rooted_code(t: &Graph, root: usize, parent: Option<usize>) -> String {
    let mut children: Vec<String> = t
        .neighbors(root)
        .iter()
        .filter(|&&w| Some(w) != parent)
        .map(|&w| rooted_code(t, w, Some(root)))
        .collect();
    children.sort_unstable();
    let mut out = String::with_capacity(2 + children.iter().map(String::len).sum::<usize>());
    out.push('(');
    for c in children {
        out.push_str(&c);
    }
    out.push(')');
    out
}

/// One representative per isomorphism class of free trees on `n` vertices,
/// refusing `n` above [`DEFAULT_ENUMERATION_BOUND`].
pub fn enumerate_trees(n: usize) -> Result<Vec<Graph>, TreeError> {
    enumerate_trees_bounded(n, DEFAULT_ENUMERATION_BOUND)
}

/// Trees grow one leaf at a time from K₁; duplicates are dropped by
/// canonical form. Output is sorted by canonical form.
pub fn enumerate_trees_bounded(n: usize, bound: usize) -> Result<Vec<Graph>, TreeError> {
    if n == 0 {
        return Err(TreeError::ZeroOrder);
    }
    if n > bound {
        return Err(TreeError::OverBound { n, bound });
    }
    let mut level: BTreeMap<String, Graph> = BTreeMap::new();
    let k1 = Graph::empty(1);
    level.insert(canonical_form(&k1), k1);
    for _ in 1..n {
        let mut next = BTreeMap::new();
        for t in level.values() {
            for u in 0..t.order() {
                let grown = tree_plus(t, u).expect("u is in range");
                next.entry(canonical_form(&grown)).or_insert(grown);
            }
        }
        level = next;
    }
    Ok(level.into_values().collect())
}

/// Every tree on 1..=max_n vertices, smallest first.
pub fn tree_catalog(max_n: usize) -> Result<Vec<Graph>, TreeError> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(enumerate_trees_bounded(
            n,
            max_n.max(DEFAULT_ENUMERATION_BOUND),
        )?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;

    fn broom() -> Graph {
        parse_edge_list("5\n0 1\n1 2\n2 3\n2 4").unwrap()
    }

    fn three_per(g: &Graph) -> Option<Vec<usize>> {
        is_n_peripheral(&all_pairs_distances(g), 3)
            .unwrap()
            .map(|w| w.vertices)
    }

    #[test]
    fn n_peripheral_examples() {
        assert_eq!(three_per(&Graph::star(3)), Some(vec![1, 2, 3]));
        assert_eq!(three_per(&broom()), None);
        for m in 2..=8 {
            assert_eq!(three_per(&Graph::path(m)), None, "P{m}");
        }
        let dm = all_pairs_distances(&Graph::path(3));
        assert_eq!(is_n_peripheral(&dm, 0), Err(TreeError::ZeroOrder));
        assert_eq!(
            is_n_peripheral(&dm, 2).unwrap().unwrap().vertices,
            vec![0, 2]
        );
        let k1 = all_pairs_distances(&Graph::empty(1));
        assert_eq!(is_n_peripheral(&k1, 1).unwrap().unwrap().vertices, vec![0]);
        assert_eq!(is_n_peripheral(&k1, 2).unwrap(), None);
        let split = all_pairs_distances(&Graph::path(2).disjoint_union(&Graph::path(2)));
        assert_eq!(is_n_peripheral(&split, 2), Err(TreeError::Disconnected));
    }

    #[test]
    fn minus_transform_examples() {
        let p4 = Graph::path(4);
        assert_eq!(tree_minus(&p4, 0).unwrap().graph, Graph::path(3));
        assert_eq!(tree_minus(&p4, 3).unwrap().to_parent, vec![1, 2, 3]);

        let h = broom();
        let minus_w4 = tree_minus(&h, 3).unwrap();
        assert_eq!(minus_w4.to_parent, vec![1, 2, 3, 4]);
        assert_eq!(
            canonical_form(&minus_w4.graph),
            canonical_form(&Graph::star(3))
        );

        let minus_w1 = tree_minus(&h, 0).unwrap();
        assert_eq!(minus_w1.to_parent, vec![0, 1, 2]);
        assert_eq!(minus_w1.graph, Graph::path(3));

        assert_eq!(tree_minus(&h, 1), Err(TreeError::NotPeripheral(1)));
        assert_eq!(tree_minus(&Graph::empty(1), 0), Err(TreeError::Trivial));
        assert_eq!(tree_minus(&Graph::cycle(4), 0), Err(TreeError::NotATree));
    }

    #[test]
    fn plus_transform_examples() {
        let star = tree_plus(&Graph::path(3), 1).unwrap();
        assert_eq!(canonical_form(&star), canonical_form(&Graph::star(3)));
        assert_eq!(tree_plus(&Graph::path(2), 0).unwrap().edges().count(), 2);
        assert_eq!(
            canonical_form(&tree_plus(&Graph::path(2), 1).unwrap()),
            canonical_form(&Graph::path(3))
        );
        assert_eq!(tree_plus(&Graph::empty(1), 0).unwrap(), Graph::path(2));
        assert_eq!(
            tree_plus(&Graph::path(2), 2),
            Err(TreeError::VertexOutOfRange { v: 2, n: 2 })
        );
    }

    #[test]
    fn classification_examples() {
        let p3 = classify_tree(&Graph::path(3)).unwrap();
        assert_eq!(
            (p3.kind, p3.parity, p3.witness),
            (TreeKind::WeaklyNon3Peripheral, Parity::Even, Some(1))
        );

        let p5 = classify_tree(&Graph::path(5)).unwrap();
        assert_eq!(
            (p5.kind, p5.parity),
            (TreeKind::StronglyNon3Peripheral, Parity::Even)
        );

        let p4 = classify_tree(&Graph::path(4)).unwrap();
        assert_eq!(
            (p4.kind, p4.parity, p4.witness),
            (TreeKind::StronglyNon3Peripheral, Parity::Odd, Some(0))
        );

        let h = classify_tree(&broom()).unwrap();
        assert_eq!(
            (h.kind, h.parity, h.witness),
            (TreeKind::StronglyNon3Peripheral, Parity::Odd, Some(0))
        );

        let p2 = classify_tree(&Graph::path(2)).unwrap();
        assert!(p2.is_p2);
        assert_eq!(
            (p2.kind, p2.parity),
            (TreeKind::StronglyNon3Peripheral, Parity::Odd)
        );

        let k1 = classify_tree(&Graph::empty(1)).unwrap();
        assert_eq!((k1.kind, k1.parity), (TreeKind::Trivial, Parity::Zero));

        assert_eq!(
            classify_tree(&Graph::star(3)).unwrap().kind,
            TreeKind::ThreePeripheral
        );
        assert_eq!(classify_tree(&Graph::cycle(5)), Err(TreeError::NotATree));
    }

    #[test]
    fn weakly_odd_example() {
        // Double star: two adjacent centers with two leaves each. Every
        // T_{v^-} is K_{1,3}.
        let g = Graph::from_edges(6, [(0, 2), (1, 2), (2, 3), (3, 4), (3, 5)]).unwrap();
        let c = classify_tree(&g).unwrap();
        assert_eq!(
            (c.kind, c.parity, c.witness),
            (TreeKind::WeaklyNon3Peripheral, Parity::Odd, None)
        );
    }

    #[test]
    fn class_serializes() {
        let c = classify_tree(&broom()).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"StronglyNon3Peripheral","diameter":3,"parity":"odd","is_p2":false,"witness":0}"#
        );
    }

    #[test]
    fn canonical_form_distinguishes_small_trees() {
        assert_eq!(canonical_form(&Graph::empty(1)), "()");
        assert_eq!(canonical_form(&Graph::path(2)), "()()");
        let relabeled = Graph::from_edges(4, [(3, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(canonical_form(&relabeled), canonical_form(&Graph::path(4)));
        assert_ne!(
            canonical_form(&Graph::star(3)),
            canonical_form(&Graph::path(4))
        );
    }

    #[test]
    fn enumeration_counts() {
        let counts: Vec<usize> = (1..=10)
            .map(|n| enumerate_trees(n).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11, 23, 47, 106]);
        assert_eq!(enumerate_trees(2).unwrap(), vec![Graph::path(2)]);
        assert_eq!(
            enumerate_trees(11),
            Err(TreeError::OverBound { n: 11, bound: 10 })
        );
        assert_eq!(enumerate_trees(0), Err(TreeError::ZeroOrder));
        for t in enumerate_trees(7).unwrap() {
            assert!(t.is_tree());
            assert_eq!(t.order(), 7);
        }
    }
}
