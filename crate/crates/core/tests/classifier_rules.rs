mod common;

use proptest::prelude::*;
use rainbow_aw::classifier::{
    aw_forest_product, aw_tree_product, aw_tree_product_ordered, Rule, RuleOrder, Witness,
};
use rainbow_aw::coloring::find_rainbow_3ap;
use rainbow_aw::graph::{parse_edge_list, Graph};
use rainbow_aw::oracle::sweep_pairs;
use rainbow_aw::product::cartesian_product;

fn grid_value(m: usize, n: usize) -> u32 {
    let (m, n) = (m.min(n), m.max(n));
    if (m == 2 && n % 2 == 0) || (m == 3 && n % 2 == 1) {
        3
    } else {
        4
    }
}

#[test]
fn path_grid() {
    for m in 2..=8 {
        for n in 2..=8 {
            let r = aw_tree_product(&Graph::path(m), &Graph::path(n)).unwrap();
            assert_eq!(r.value, grid_value(m, n), "P{m} x P{n} via {:?}", r.rule);
        }
    }
}

#[test]
fn every_pair_fires_exactly_one_value() {
    for (t, t2) in sweep_pairs(7) {
        let a = aw_tree_product_ordered(&t, &t2, RuleOrder::P2First).unwrap();
        let b = aw_tree_product_ordered(&t, &t2, RuleOrder::WeaklyFirst).unwrap();
        assert_eq!(a.value, b.value);
        assert!(a.value == 3 || a.value == 4);
        if a.rule != b.rule {
            assert!(matches!(
                (a.rule, b.rule),
                (Rule::P2Factor, Rule::WeaklyFactor)
            ));
        }
    }
}

#[test]
fn factor_order_does_not_matter() {
    for (t, t2) in sweep_pairs(7) {
        let a = aw_tree_product(&t, &t2).unwrap();
        let b = aw_tree_product(&t2, &t).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.rule, b.rule);
    }
}

#[test]
fn value_four_always_has_a_checked_coloring() {
    for (t, t2) in sweep_pairs(7) {
        let r = aw_tree_product(&t, &t2).unwrap();
        match (&r.witness, r.rule) {
            (Witness::RainbowFree { coloring, .. }, Rule::BothStrongly) => {
                let pg = cartesian_product(&t, &t2).unwrap();
                assert!(coloring.is_exact() && coloring.palette() == 3);
                assert_eq!(find_rainbow_3ap(&pg, coloring), None);
            }
            (_, Rule::BothStrongly) => panic!("rule 5 without a coloring"),
            _ => {}
        }
    }
}

#[test]
fn aw_result_json_shape() {
    let r = aw_tree_product(&Graph::path(4), &Graph::path(4)).unwrap();
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    assert_eq!(v["aw"], 4);
    assert_eq!(v["rule"], "BothStrongly");
    assert_eq!(v["witnesses"]["type"], "rainbow_free");
    assert_eq!(
        v["witnesses"]["anchors"],
        serde_json::json!({"u1": 0, "w1": 0, "j": 3, "k": 3})
    );
    assert_eq!(v["witnesses"]["coloring"]["r"], 3);
}

#[test]
fn star_factor_fires_first_rule_with_any_partner() {
    for t in rainbow_aw::tree::tree_catalog(6)
        .unwrap()
        .into_iter()
        .filter(|t| t.order() >= 2)
    {
        let r = aw_tree_product(&Graph::star(3), &t).unwrap();
        assert_eq!((r.value, r.rule), (3, Rule::ThreePeripheralFactor));
    }
}

fn forest(components: &[Graph]) -> Graph {
    components
        .iter()
        .fold(Graph::empty(0), |acc, c| acc.disjoint_union(c))
}

proptest! {
    #[test]
    fn forest_formula_is_componentwise(
        f1 in proptest::collection::vec(common::tree(2, 5), 1..=4),
        f2 in proptest::collection::vec(common::tree(2, 5), 1..=4),
    ) {
        let got = aw_forest_product(&forest(&f1), &forest(&f2)).unwrap();
        let mut summed = 1;
        for a in &f1 {
            for b in &f2 {
                summed += aw_tree_product(a, b).unwrap().value - 1;
            }
        }
        prop_assert_eq!(got.aw, summed);
        prop_assert_eq!(got.pairs.len(), f1.len() * f2.len());
        prop_assert_eq!(got.aw as usize, 2 * got.p + 3 * got.s + 1);
    }
}

#[test]
fn broom_component_in_a_forest() {
    let broom = parse_edge_list("5\n0 1\n1 2\n2 3\n2 4").unwrap();
    let f = aw_forest_product(&broom.disjoint_union(&Graph::path(3)), &Graph::path(4)).unwrap();
    // broom x P4: both strongly, even diameter sum -> 4; P3 x P4: odd -> 4.
    assert_eq!((f.p, f.s, f.aw), (0, 2, 7));
}
