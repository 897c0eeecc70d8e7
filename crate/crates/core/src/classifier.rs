//! Closed-form `aw(T□T',3)` for nontrivial trees and `aw(F₁□F₂,3)` for
//! forests without isolated vertices.
//!
//! Rules, first match wins:
//!
//! 1. a factor is 3-peripheral: 3;
//! 2. `diam(T) + diam(T')` is odd: 4;
//! 3. a factor is P₂: 3;
//! 4. a factor is weakly non-3-peripheral: 3;
//! 5. otherwise (both strongly non-3-peripheral, even product diameter): 4,
//!    backed by an explicit rainbow-free exact 3-coloring that is checked
//!    before the result is returned.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{
    find_rainbow_3ap, find_rbg_anchors, rbg_coloring, Coloring, ColoringError, RbgAnchors,
};
use crate::graph::{all_pairs_distances, connected_components, Graph};
use crate::product::{cartesian_product, Factor, ProductGraph};
use crate::tree::{classify_tree, is_n_peripheral, Parity, TreeClass, TreeError, TreeKind};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifierError {
    #[error("{0:?} factor is not a tree")]
    NotATree(Factor),
    #[error("{0:?} factor is the trivial tree")]
    TrivialFactor(Factor),
    #[error("{0:?} input is not a forest")]
    NotAForest(Factor),
    #[error("{0:?} forest is empty")]
    EmptyForest(Factor),
    #[error("{factor:?} forest has an isolated vertex ({vertex}); single-vertex components are not supported")]
    TrivialComponent { factor: Factor, vertex: usize },
    #[error("no anchor pair for the rainbow-free construction")]
    MissingWitness,
    #[error("constructed coloring failed verification: {0}")]
    UnverifiedColoring(String),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    ThreePeripheralFactor,
    OddProductDiameter,
    P2Factor,
    WeaklyFactor,
    BothStrongly,
}

impl Rule {
    pub fn number(self) -> u8 {
        match self {
            Rule::ThreePeripheralFactor => 1,
            Rule::OddProductDiameter => 2,
            Rule::P2Factor => 3,
            Rule::WeaklyFactor => 4,
            Rule::BothStrongly => 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    ThreePeripheral {
        factor: Factor,
        triple: Vec<usize>,
    },
    OddDiameter {
        first: u32,
        second: u32,
    },
    P2 {
        factor: Factor,
    },
    Weakly {
        factor: Factor,
        vertex: Option<usize>,
    },
    RainbowFree {
        anchors: RbgAnchors,
        coloring: Coloring,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AwResult {
    #[serde(rename = "aw")]
    pub value: u32,
    pub rule: Rule,
    pub first: TreeClass,
    pub second: TreeClass,
    #[serde(rename = "witnesses")]
    pub witness: Witness,
}

/// Which of rules 3 and 4 is tried first. Both orders give the same value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RuleOrder {
    #[default]
    P2First,
    WeaklyFirst,
}

pub fn aw_tree_product(t: &Graph, t2: &Graph) -> Result<AwResult, ClassifierError> {
    aw_tree_product_ordered(t, t2, RuleOrder::default())
}

pub fn aw_tree_product_ordered(
    t: &Graph,
    t2: &Graph,
    order: RuleOrder,
) -> Result<AwResult, ClassifierError> {
    let first = factor_class(t, Factor::First)?;
    let second = factor_class(t2, Factor::Second)?;
    let classes = [(Factor::First, t, &first), (Factor::Second, t2, &second)];

    let (value, rule, witness) = if let Some((factor, g, _)) = classes
        .iter()
        .find(|(_, _, c)| c.kind == TreeKind::ThreePeripheral)
    {
        let triple = is_n_peripheral(&all_pairs_distances(g), 3)?
            .expect("classified as 3-peripheral")
            .vertices;
        (
            3,
            Rule::ThreePeripheralFactor,
            Witness::ThreePeripheral {
                factor: *factor,
                triple,
            },
        )
    } else if Parity::of(first.diameter + second.diameter) == Parity::Odd {
        (
            4,
            Rule::OddProductDiameter,
            Witness::OddDiameter {
                first: first.diameter,
                second: second.diameter,
            },
        )
    } else {
        let p2 = classes.iter().find(|(_, _, c)| c.is_p2).map(|(f, _, _)| *f);
        let weakly = classes
            .iter()
            .find(|(_, _, c)| c.kind == TreeKind::WeaklyNon3Peripheral)
            .map(|(f, _, c)| (*f, c.witness));
        let p2_rule = p2.map(|factor| (3, Rule::P2Factor, Witness::P2 { factor }));
        let weakly_rule = weakly
            .map(|(factor, vertex)| (3, Rule::WeaklyFactor, Witness::Weakly { factor, vertex }));
        let early = match order {
            RuleOrder::P2First => p2_rule.or(weakly_rule),
            RuleOrder::WeaklyFirst => weakly_rule.or(p2_rule),
        };
        match early {
            Some(hit) => hit,
            None => {
                let (anchors, coloring) = verified_coloring(t, t2)?;
                (
                    4,
                    Rule::BothStrongly,
                    Witness::RainbowFree { anchors, coloring },
                )
            }
        }
    };
    Ok(AwResult {
        value,
        rule,
        first,
        second,
        witness,
    })
}

fn factor_class(t: &Graph, which: Factor) -> Result<TreeClass, ClassifierError> {
    if !t.is_tree() {
        return Err(ClassifierError::NotATree(which));
    }
    let class = classify_tree(t)?;
    if class.kind == TreeKind::Trivial {
        return Err(ClassifierError::TrivialFactor(which));
    }
    Ok(class)
}

fn verified_coloring(t: &Graph, t2: &Graph) -> Result<(RbgAnchors, Coloring), ClassifierError> {
    let anchors = find_rbg_anchors(t, t2)?.ok_or(ClassifierError::MissingWitness)?;
    let pg: ProductGraph = cartesian_product(t, t2).expect("factors are nonempty");
    let coloring = rbg_coloring(&pg, &anchors)?;
    if !coloring.is_exact() {
        return Err(ClassifierError::UnverifiedColoring(
            "coloring is not exact".into(),
        ));
    }
    if let Some(tr) = find_rainbow_3ap(&pg, &coloring) {
        return Err(ClassifierError::UnverifiedColoring(format!(
            "rainbow 3-AP ({}, {}, {}) with difference {}",
            pg.label(tr.x),
            pg.label(tr.y),
            pg.label(tr.z),
            tr.d
        )));
    }
    Ok((anchors, coloring))
}

/// One component pair `T_a □ T'_b` of a forest product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentPair {
    pub first_component: usize,
    pub second_component: usize,
    pub first_vertices: Vec<usize>,
    pub second_vertices: Vec<usize>,
    pub aw: u32,
    pub rule: Rule,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestBreakdown {
    pub pairs: Vec<ComponentPair>,
    /// Components with aw = 3.
    pub p: usize,
    /// Components with aw = 4.
    pub s: usize,
    pub aw: u32,
}

/// `2|P| + 3|S| + 1` over the component products, cross-checked against
/// `1 + Σ(aw_i - 1)`.
pub fn aw_forest_product(f1: &Graph, f2: &Graph) -> Result<ForestBreakdown, ClassifierError> {
    let comps1 = forest_components(f1, Factor::First)?;
    let comps2 = forest_components(f2, Factor::Second)?;
    let jobs: Vec<(usize, usize)> = (0..comps1.len())
        .flat_map(|a| (0..comps2.len()).map(move |b| (a, b)))
        .collect();
    let pairs = jobs
        .par_iter()
        .map(|&(a, b)| {
            let res = aw_tree_product(&comps1[a].graph, &comps2[b].graph)?;
            Ok(ComponentPair {
                first_component: a,
                second_component: b,
                first_vertices: comps1[a].to_parent.clone(),
                second_vertices: comps2[b].to_parent.clone(),
                aw: res.value,
                rule: res.rule,
            })
        })
        .collect::<Result<Vec<_>, ClassifierError>>()?;
    let p = pairs.iter().filter(|c| c.aw == 3).count();
    let s = pairs.iter().filter(|c| c.aw == 4).count();
    let aw = (2 * p + 3 * s + 1) as u32;
    let summed = 1 + pairs.iter().map(|c| c.aw - 1).sum::<u32>();
    assert_eq!(aw, summed, "component values outside {{3, 4}}");
    Ok(ForestBreakdown { pairs, p, s, aw })
}

fn forest_components(
    f: &Graph,
    which: Factor,
) -> Result<Vec<crate::graph::Subgraph>, ClassifierError> {
    if f.order() == 0 {
        return Err(ClassifierError::EmptyForest(which));
    }
    if !f.is_forest() {
        return Err(ClassifierError::NotAForest(which));
    }
    let comps = connected_components(f);
    if let Some(c) = comps.iter().find(|c| c.graph.order() == 1) {
        return Err(ClassifierError::TrivialComponent {
            factor: which,
            vertex: c.to_parent[0],
        });
    }
    Ok(comps)
}

fn describe(class: &TreeClass) -> String {
    let kind = match class.kind {
        TreeKind::Trivial => "trivial",
        TreeKind::ThreePeripheral => "3-peripheral",
        TreeKind::StronglyNon3Peripheral => "strongly non-3-peripheral",
        TreeKind::WeaklyNon3Peripheral => "weakly non-3-peripheral",
    };
    let p2 = if class.is_p2 { ", P2" } else { "" };
    format!("{kind}, diameter {}{p2}", class.diameter)
}

fn factor_name(f: Factor) -> &'static str {
    match f {
        Factor::First => "T",
        Factor::Second => "T'",
    }
}

/// Human-readable trace of the rule that fired. Vertex ids are printed
/// 1-based.
pub fn explain(result: &AwResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "T:  {}", describe(&result.first));
    let _ = writeln!(out, "T': {}", describe(&result.second));
    let _ = writeln!(
        out,
        "diam(T□T') = {}",
        result.first.diameter + result.second.diameter
    );
    let reason = match &result.witness {
        Witness::ThreePeripheral { factor, triple } => {
            let ids: Vec<String> = triple.iter().map(|v| format!("u{}", v + 1)).collect();
            format!(
                "{} is 3-peripheral: {} are pairwise at diameter distance",
                factor_name(*factor),
                ids.join(", ")
            )
        }
        Witness::OddDiameter { first, second } => {
            format!("diameter {first} + {second} is odd and neither factor is 3-peripheral")
        }
        Witness::P2 { factor } => format!("{} is P2 and the product diameter is even", factor_name(*factor)),
        Witness::Weakly { factor, vertex } => {
            let detail = match vertex {
                Some(u) => format!(" (adding a leaf at u{} makes it 3-peripheral)", u + 1),
                None => " (every minus-transform at a peripheral vertex is 3-peripheral)".to_string(),
            };
            format!("{} is weakly non-3-peripheral{detail}", factor_name(*factor))
        }
        Witness::RainbowFree { anchors, .. } => format!(
            "both factors are strongly non-3-peripheral; rainbow-free exact 3-coloring anchored at v{},{} and v{},{} verified",
            anchors.u1 + 1,
            anchors.w1 + 1,
            anchors.j + 1,
            anchors.k + 1
        ),
    };
    let _ = writeln!(
        out,
        "rule {} ({:?}): {reason}",
        result.rule.number(),
        result.rule
    );
    let _ = writeln!(out, "aw(T□T',3) = {}", result.value);
    out
}
