#![allow(dead_code)]

use proptest::prelude::*;
use rainbow_aw::graph::Graph;

/// Connected graph on `n` vertices: a random spanning tree (parent of `i`
/// is below `i`) plus a random subset of the remaining pairs.
pub fn connected_graph(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n).prop_flat_map(|n| {
        let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|i| (0..i).boxed()).collect();
        let pairs = n * n.saturating_sub(1) / 2;
        (
            parents,
            proptest::collection::vec(any::<bool>(), pairs),
            0u8..4,
        )
            .prop_map(move |(parents, extra, density)| {
                let mut edges: Vec<(usize, usize)> = parents
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| (p, i + 1))
                    .collect();
                let mut k = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        // density 0 keeps the tree; higher values add more chords.
                        if extra[k] && (k % 4) < density as usize && !edges.contains(&(u, v)) {
                            edges.push((u, v));
                        }
                        k += 1;
                    }
                }
                Graph::from_edges(n, edges).unwrap()
            })
    })
}

/// Random labelled tree on `n` vertices from a parent vector.
pub fn tree(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n).prop_flat_map(|n| {
        let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|i| (0..i).boxed()).collect();
        parents.prop_map(move |ps| {
            Graph::from_edges(n, ps.iter().enumerate().map(|(i, &p)| (p, i + 1))).unwrap()
        })
    })
}

/// Floyd–Warshall with `None` for "unreachable".
pub fn floyd_warshall(g: &Graph) -> Vec<Vec<Option<u32>>> {
    let n = g.order();
    let mut d = vec![vec![None; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = Some(0);
    }
    for (u, v) in g.edges() {
        d[u][v] = Some(1);
        d[v][u] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

/// Every (x, y, z) with x < z, y distinct from both and d(x,y) = d(y,z).
pub fn naive_triples(d: &[Vec<Option<u32>>]) -> Vec<(usize, usize, usize)> {
    let n = d.len();
    let mut out = Vec::new();
    for x in 0..n {
        for z in x + 1..n {
            for y in 0..n {
                if y != x && y != z && d[x][y].is_some() && d[x][y] == d[y][z] {
                    out.push((x, y, z));
                }
            }
        }
    }
    out
}

pub fn has_rainbow(triples: &[(usize, usize, usize)], colors: &[u32]) -> bool {
    triples.iter().any(|&(x, y, z)| {
        colors[x] != colors[y] && colors[y] != colors[z] && colors[x] != colors[z]
    })
}

/// Calls `visit` on every surjective coloring of `n` vertices with `r`
/// colors, up to renaming of colors (restricted growth strings). Stops early
/// when `visit` returns true; returns whether it did.
pub fn any_exact_coloring(n: usize, r: usize, mut visit: impl FnMut(&[u32]) -> bool) -> bool {
    fn go(
        c: &mut Vec<u32>,
        n: usize,
        r: usize,
        used: u32,
        visit: &mut dyn FnMut(&[u32]) -> bool,
    ) -> bool {
        if c.len() == n {
            return used as usize == r && visit(c);
        }
        if (r - used as usize) > n - c.len() {
            return false;
        }
        let top = (used + 1).min(r as u32);
        for col in 0..top {
            c.push(col);
            let hit = go(c, n, r, used.max(col + 1), visit);
            c.pop();
            if hit {
                return true;
            }
        }
        false
    }
    go(&mut Vec::with_capacity(n), n, r, 0, &mut visit)
}

pub fn path_vertices(d: &[Vec<Option<u32>>], u: usize, v: usize) -> Vec<usize> {
    let duv = d[u][v].unwrap();
    (0..d.len())
        .filter(|&w| d[u][w].unwrap() + d[w][v].unwrap() == duv)
        .collect()
}
