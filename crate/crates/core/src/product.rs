//! Cartesian products G□H with coordinate bookkeeping.
//!
//! Product vertex `(i, j)` (i in the first factor, j in the second) has flat
//! id `i * n2 + j`. Human-facing labels are 1-based: flat id 0 is `v1,1`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{all_pairs_distances, DistanceMatrix, Graph, Metric, VertexSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProductError {
    #[error("product factors must be nonempty")]
    EmptyFactor,
    #[error("product vertex {id} out of range (order {n})")]
    OutOfRange { id: usize, n: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Factor {
    First,
    Second,
}

impl Factor {
    pub fn other(self) -> Factor {
        match self {
            Factor::First => Factor::Second,
            Factor::Second => Factor::First,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProductGraph {
    graph: Graph,
    n1: usize,
    n2: usize,
    first: DistanceMatrix,
    second: DistanceMatrix,
}

pub fn cartesian_product(g: &Graph, h: &Graph) -> Result<ProductGraph, ProductError> {
    let (n1, n2) = (g.order(), h.order());
    if n1 == 0 || n2 == 0 {
        return Err(ProductError::EmptyFactor);
    }
    let flat = |i: usize, j: usize| i * n2 + j;
    let mut edges = Vec::with_capacity(n1 * h.edge_count() + n2 * g.edge_count());
    for i in 0..n1 {
        edges.extend(h.edges().map(|(a, b)| (flat(i, a), flat(i, b))));
    }
    for j in 0..n2 {
        edges.extend(g.edges().map(|(a, b)| (flat(a, j), flat(b, j))));
    }
    let graph = Graph::from_edges(n1 * n2, edges).expect("product of simple graphs is simple");
    Ok(ProductGraph {
        graph,
        n1,
        n2,
        first: all_pairs_distances(g),
        second: all_pairs_distances(h),
    })
}

impl ProductGraph {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn order(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn factor_orders(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    pub fn first_distances(&self) -> &DistanceMatrix {
        &self.first
    }

    pub fn second_distances(&self) -> &DistanceMatrix {
        &self.second
    }

    pub fn flat(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n1 && j < self.n2);
        i * self.n2 + j
    }

    pub fn coords(&self, v: usize) -> (usize, usize) {
        (v / self.n2, v % self.n2)
    }

    /// 1-based `"i,j"` label.
    pub fn label(&self, v: usize) -> String {
        let (i, j) = self.coords(v);
        format!("{},{}", i + 1, j + 1)
    }

    /// diam(G) + diam(H); meaningful for connected factors.
    pub fn diameter(&self) -> u32 {
        self.first.diameter() + self.second.diameter()
    }

    pub fn is_connected(&self) -> bool {
        self.first.is_connected() && self.second.is_connected()
    }

    /// d_G(i,h) + d_H(j,k), read from the factor matrices.
    pub fn product_distance(&self, a: usize, b: usize) -> Result<Option<u32>, ProductError> {
        let n = self.order();
        for id in [a, b] {
            if id >= n {
                return Err(ProductError::OutOfRange { id, n });
            }
        }
        Ok(self.dist(a, b))
    }

    /// Vertex set of one copy of a factor: with `Factor::First` the copy
    /// `G_index` = {(·, index)}; with `Factor::Second` the copy
    /// `H_index` = {(index, ·)}.
    pub fn copy_of_factor(&self, which: Factor, index: usize) -> Result<VertexSet, ProductError> {
        let n = self.order();
        let bound = match which {
            Factor::First => self.n2,
            Factor::Second => self.n1,
        };
        if index >= bound {
            return Err(ProductError::OutOfRange {
                id: index,
                n: bound,
            });
        }
        Ok(match which {
            Factor::First => VertexSet::from_ids(n, (0..self.n1).map(|i| self.flat(i, index))),
            Factor::Second => VertexSet::from_ids(n, (0..self.n2).map(|j| self.flat(index, j))),
        })
    }
}

impl Metric for ProductGraph {
    fn order(&self) -> usize {
        self.n1 * self.n2
    }

    fn dist(&self, a: usize, b: usize) -> Option<u32> {
        let (i, j) = self.coords(a);
        let (h, k) = self.coords(b);
        Some(self.first.get(i, h)? + self.second.get(j, k)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;

    fn broom() -> Graph {
        parse_edge_list("5\n0 1\n1 2\n2 3\n2 4").unwrap()
    }

    #[test]
    fn small_products() {
        let c4 = cartesian_product(&Graph::path(2), &Graph::path(2)).unwrap();
        assert_eq!(c4.graph().edge_count(), 4);
        assert!((0..4).all(|v| c4.graph().degree(v) == 2));

        let fig = cartesian_product(&Graph::path(4), &broom()).unwrap();
        assert_eq!((fig.order(), fig.graph().edge_count()), (20, 31));

        let t = broom();
        let same = cartesian_product(&Graph::empty(1), &t).unwrap();
        assert_eq!(same.graph(), &t);

        assert_eq!(
            cartesian_product(&Graph::empty(0), &t).unwrap_err(),
            ProductError::EmptyFactor
        );
    }

    #[test]
    fn adjacency_rule() {
        let g = broom();
        let h = Graph::path(3);
        let pg = cartesian_product(&g, &h).unwrap();
        for a in 0..pg.order() {
            for b in 0..pg.order() {
                let ((i, j), (x, y)) = (pg.coords(a), pg.coords(b));
                let expect = (i == x && h.has_edge(j, y)) || (j == y && g.has_edge(i, x));
                assert_eq!(pg.graph().has_edge(a, b), expect);
            }
        }
    }

    #[test]
    fn factored_distances() {
        let pg = cartesian_product(&Graph::path(4), &broom()).unwrap();
        let v11 = pg.flat(0, 0);
        assert_eq!(pg.product_distance(v11, v11), Ok(Some(0)));
        assert_eq!(pg.product_distance(v11, pg.flat(3, 3)), Ok(Some(6)));
        assert_eq!(
            pg.product_distance(0, 20),
            Err(ProductError::OutOfRange { id: 20, n: 20 })
        );
        assert_eq!(pg.label(pg.flat(3, 3)), "4,4");
        assert_eq!(pg.diameter(), 6);
    }

    #[test]
    fn copies() {
        let pg = cartesian_product(&Graph::path(4), &broom()).unwrap();
        let g1 = pg.copy_of_factor(Factor::First, 0).unwrap();
        let labels: Vec<String> = g1.iter().map(|v| pg.label(v)).collect();
        assert_eq!(labels, ["1,1", "2,1", "3,1", "4,1"]);
        let h3 = pg.copy_of_factor(Factor::Second, 2).unwrap();
        let labels: Vec<String> = h3.iter().map(|v| pg.label(v)).collect();
        assert_eq!(labels, ["3,1", "3,2", "3,3", "3,4", "3,5"]);
        assert!(pg.copy_of_factor(Factor::First, 5).is_err());
        assert!(pg.copy_of_factor(Factor::Second, 4).is_err());
    }
}
