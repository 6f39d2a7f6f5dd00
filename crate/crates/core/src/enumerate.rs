//! Small graphs up to isomorphism.
//!
//! Classes on `n` vertices are grown from classes on `n - 1` vertices by adding a
//! vertex with every possible neighbourhood and deduplicating on a canonical
//! code. The canonical code is the smallest upper-triangle bit string over all
//! leaves of an individualization-refinement search.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::graph::Graph;

/// Largest vertex count for which [`canonical_code`] fits in a `u64`.
pub const MAX_CANONICAL_VERTICES: usize = 11;

/// Largest vertex count [`graphs_on`] will enumerate.
pub const MAX_ENUMERATED_VERTICES: usize = 9;

fn code_of(g: &Graph, order: &[usize]) -> u64 {
    let n = order.len();
    let mut code = 0u64;
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if g.has_edge(order[i], order[j]) {
                code |= 1 << bit;
            }
            bit += 1;
        }
    }
    code
}

/// Splits cells by neighbour counts into each cell until stable. Sub-cells are
/// ordered by their count signature, so the result is label independent.
fn refine(g: &Graph, cells: &mut Vec<Vec<usize>>) {
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < cells.len() {
            if cells[i].len() == 1 {
                i += 1;
                continue;
            }
            let sig = |v: usize| -> Vec<usize> {
                cells
                    .iter()
                    .map(|c| c.iter().filter(|&&u| g.has_edge(u, v)).count())
                    .collect()
            };
            let mut tagged: Vec<(Vec<usize>, usize)> =
                cells[i].iter().map(|&v| (sig(v), v)).collect();
            tagged.sort();
            let mut split: Vec<Vec<usize>> = Vec::new();
            for (k, (s, v)) in tagged.iter().enumerate() {
                if k == 0 || *s != tagged[k - 1].0 {
                    split.push(Vec::new());
                }
                split.last_mut().unwrap().push(*v);
            }
            if split.len() > 1 {
                let count = split.len();
                cells.splice(i..=i, split);
                changed = true;
                i += count;
            } else {
                i += 1;
            }
        }
        if !changed {
            return;
        }
    }
}

fn search(g: &Graph, mut cells: Vec<Vec<usize>>, best: &mut Option<u64>) {
    refine(g, &mut cells);
    let Some(target) = cells.iter().position(|c| c.len() > 1) else {
        let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
        let code = code_of(g, &order);
        if best.is_none_or(|b| code < b) {
            *best = Some(code);
        }
        return;
    };
    for &v in &cells[target] {
        let mut next = cells.clone();
        let rest: Vec<usize> = next[target].iter().copied().filter(|&u| u != v).collect();
        next.splice(target..=target, [vec![v], rest]);
        search(g, next, best);
    }
}

/// Isomorphism invariant code: equal codes iff isomorphic graphs (same `n`).
pub fn canonical_code(g: &Graph) -> u64 {
    assert!(
        g.n() <= MAX_CANONICAL_VERTICES,
        "canonical codes need at most 11 vertices"
    );
    if g.n() == 0 {
        return 0;
    }
    let mut by_degree: Vec<usize> = (0..g.n()).collect();
    by_degree.sort_by_key(|&v| (g.degree(v), v));
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for (k, &v) in by_degree.iter().enumerate() {
        if k == 0 || g.degree(v) != g.degree(by_degree[k - 1]) {
            cells.push(Vec::new());
        }
        cells.last_mut().unwrap().push(v);
    }
    let mut best = None;
    search(g, cells, &mut best);
    best.expect("search reaches a leaf")
}

/// The graph encoded by a canonical code on `n` vertices.
pub fn from_code(n: usize, code: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if code >> bit & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, &edges).expect("valid")
}

/// One representative per isomorphism class on exactly `n` vertices, in
/// increasing canonical-code order.
pub fn graphs_on(n: usize) -> Vec<Graph> {
    assert!(
        n <= MAX_ENUMERATED_VERTICES,
        "enumeration is limited to 9 vertices"
    );
    let mut codes: Vec<u64> = vec![0];
    for size in 1..=n {
        let prev: Vec<Graph> = codes.iter().map(|&c| from_code(size - 1, c)).collect();
        let next: HashSet<u64> = prev
            .par_iter()
            .flat_map_iter(|g| {
                (0..1u64 << (size - 1)).map(move |mask| {
                    let mut edges = g.edges();
                    edges.extend(
                        (0..size - 1)
                            .filter(|b| mask >> b & 1 == 1)
                            .map(|b| (b, size - 1)),
                    );
                    canonical_code(&Graph::from_edges(size, &edges).expect("valid"))
                })
            })
            .collect();
        codes = next.into_iter().collect();
        codes.sort_unstable();
    }
    codes.into_iter().map(|c| from_code(n, c)).collect()
}

/// Classes on `1..=n` vertices.
pub fn graphs_up_to(n: usize) -> Vec<Graph> {
    (1..=n).flat_map(graphs_on).collect()
}

/// Every labelled graph on exactly `n` vertices (`2^{n(n-1)/2}` of them).
pub fn labelled_graphs_on(n: usize) -> impl Iterator<Item = Graph> {
    let pairs = n * n.saturating_sub(1) / 2;
    assert!(pairs < 40, "labelled enumeration is limited to 9 vertices");
    (0..1u64 << pairs).map(move |code| from_code(n, code))
}

/// Connected bipartite classes on `1..=n` vertices.
pub fn connected_bipartite_up_to(n: usize) -> Vec<Graph> {
    graphs_up_to(n)
        .into_iter()
        .filter(|g| g.is_connected() && crate::pattern::PatternGraph::from_graph(g.clone()).is_ok())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle, path};

    #[test]
    fn class_counts() {
        // OEIS A000088
        let expected = [1, 1, 2, 4, 11, 34, 156, 1044];
        for (n, &e) in expected.iter().enumerate() {
            assert_eq!(graphs_on(n).len(), e, "n = {n}");
        }
    }

    #[test]
    fn connected_bipartite_counts() {
        // connected bipartite graphs on 1..=6 vertices: OEIS A005142
        let all = connected_bipartite_up_to(6);
        let per_n: Vec<usize> = (1..=6)
            .map(|n| all.iter().filter(|g| g.n() == n).count())
            .collect();
        assert_eq!(per_n, vec![1, 1, 1, 3, 5, 17]);
    }

    #[test]
    fn code_is_relabelling_invariant() {
        let g = cycle(6).disjoint_union(&path(2));
        let perm = [8, 3, 0, 7, 1, 5, 2, 6, 4];
        assert_eq!(canonical_code(&g), canonical_code(&g.relabel(&perm)));
        assert_ne!(
            canonical_code(&cycle(6)),
            canonical_code(&Graph::complete(3).disjoint_union(&Graph::complete(3)))
        );
    }
}
