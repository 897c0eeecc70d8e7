//! The search against a naive enumerate-all-colorings oracle.

mod common;

use std::time::Duration;

use proptest::prelude::*;
use rainbow_aw::coloring::find_rainbow_3ap;
use rainbow_aw::graph::{all_pairs_distances, Graph};
use rainbow_aw::oracle::{
    brute_force_aw3, crosscheck_pair, crosscheck_sweep, exists_rainbow_free_exact_coloring,
    OracleError, OracleStatus, SearchBudget,
};
use rainbow_aw::product::cartesian_product;

fn naive_exists(g: &Graph, r: usize) -> bool {
    let triples = common::naive_triples(&common::floyd_warshall(g));
    common::any_exact_coloring(g.order(), r, |c| !common::has_rainbow(&triples, c))
}

fn check_against_naive(g: &Graph) {
    let budget = SearchBudget::default();
    for r in 1..=g.order() {
        let out = exists_rainbow_free_exact_coloring(g, r, &budget).unwrap();
        let expect = naive_exists(g, r);
        match out.status {
            OracleStatus::Found(c) => {
                assert!(
                    expect,
                    "r = {r}: search found a coloring the naive oracle missed\n{}",
                    g.to_edge_list()
                );
                assert!(c.is_exact() && c.palette() == r);
                assert_eq!(find_rainbow_3ap(&all_pairs_distances(g), &c), None);
            }
            OracleStatus::Exhausted => {
                assert!(
                    !expect,
                    "r = {r}: search exhausted but a coloring exists\n{}",
                    g.to_edge_list()
                );
            }
            OracleStatus::Inconclusive => panic!("default budget spent on {} vertices", g.order()),
        }
    }
}

#[test]
fn complete_on_all_labelled_connected_graphs_up_to_five() {
    let mut checked = 0;
    for n in 1..=5usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        for mask in 0u32..(1 << pairs.len()) {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e);
            let g = Graph::from_edges(n, edges).unwrap();
            if g.is_connected() {
                check_against_naive(&g);
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 1 + 1 + 4 + 38 + 728);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn complete_on_random_connected_graphs_six_to_eight(g in common::connected_graph(6, 8)) {
        check_against_naive(&g);
    }
}

#[test]
fn aw_matches_naive_scan_on_small_products() {
    for (m, n) in [(2, 2), (2, 3), (2, 4), (3, 3), (2, 5), (3, 4)] {
        let g = cartesian_product(&Graph::path(m), &Graph::path(n))
            .unwrap()
            .graph()
            .clone();
        let naive = (3..=g.order()).find(|&r| !naive_exists(&g, r)).unwrap();
        assert_eq!(
            brute_force_aw3(&g, &SearchBudget::default()).unwrap().aw,
            naive,
            "P{m}xP{n}"
        );
    }
}

#[test]
fn tree_products_have_aw_three_or_four() {
    for rec in crosscheck_sweep(6, &SearchBudget::default()) {
        let aw = rec.oracle.aw.expect("conclusive");
        assert!(aw == 3 || aw == 4, "{rec:?}");
    }
}

#[test]
fn non_tree_products_are_also_bounded() {
    // Exploratory: the bound is for any connected factors.
    for (g, h) in [
        (Graph::cycle(4), Graph::path(3)),
        (Graph::cycle(5), Graph::path(2)),
        (Graph::cycle(3), Graph::cycle(4)),
    ] {
        let pg = cartesian_product(&g, &h).unwrap();
        let aw = brute_force_aw3(pg.graph(), &SearchBudget::default())
            .unwrap()
            .aw;
        assert!((3..=4).contains(&aw));
    }
}

#[test]
fn deterministic_outcomes_and_statistics() {
    let g = cartesian_product(&Graph::path(5), &Graph::star(3))
        .unwrap()
        .graph()
        .clone();
    let budget = SearchBudget::default();
    let a = brute_force_aw3(&g, &budget).unwrap();
    let b = brute_force_aw3(&g, &budget).unwrap();
    assert_eq!(a.aw, b.aw);
    assert_eq!(a.witness, b.witness);
    assert_eq!(a.stats.nodes, b.stats.nodes);
    let ra: Vec<_> = a
        .runs
        .iter()
        .map(|r| (r.r, r.outcome.status.clone(), r.outcome.stats.nodes))
        .collect();
    let rb: Vec<_> = b
        .runs
        .iter()
        .map(|r| (r.r, r.outcome.status.clone(), r.outcome.stats.nodes))
        .collect();
    assert_eq!(ra, rb);
}

#[test]
fn spent_budget_is_inconclusive_never_a_verdict() {
    let g = cartesian_product(&Graph::path(4), &Graph::path(5))
        .unwrap()
        .graph()
        .clone();
    let tight = SearchBudget::new(3, Duration::from_secs(60), 64).unwrap();
    let out = exists_rainbow_free_exact_coloring(&g, 3, &tight).unwrap();
    assert_eq!(out.status, OracleStatus::Inconclusive);
    assert!(matches!(
        brute_force_aw3(&g, &tight),
        Err(OracleError::Inconclusive { .. })
    ));

    let rec = crosscheck_pair(&Graph::path(4), &Graph::path(5), &tight);
    assert!(rec.oracle.inconclusive && !rec.agree && rec.oracle.aw.is_none());
}

#[test]
fn rejects_unsupported_inputs() {
    let budget = SearchBudget::default();
    let split = Graph::path(2).disjoint_union(&Graph::path(2));
    assert!(matches!(
        exists_rainbow_free_exact_coloring(&split, 2, &budget),
        Err(OracleError::Disconnected)
    ));
    assert!(matches!(
        brute_force_aw3(&Graph::path(2), &budget),
        Err(OracleError::TooSmall(2))
    ));
    assert!(SearchBudget::new(0, Duration::from_secs(1), 10).is_err());
}
