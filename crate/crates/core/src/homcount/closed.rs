//! Closed-form counts for paths, cycles and complete bipartite patterns.
//!
//! Paths and cycles are walk counts; `K_{a,b}` uses
//! `h_{K_{a,b}}(G) = Σ_T |N(T)|^a` over all sequences `T` of `b` host vertices.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::exact::{fits_u128, surjections, Acc, HomCount};
use crate::graph::Graph;
use crate::pattern::PatternGraph;

/// Longest sequence length enumerated for `K_{a,b}`.
pub const DEFAULT_SEQUENCE_CAP: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Shape {
    /// Path with `edges` edges (`edges + 1` vertices).
    Path {
        edges: usize,
    },
    Cycle {
        length: usize,
    },
    /// `K_{a,b}`: `a` vertices mapped freely into `N(T)` for sequences `T` of length `b`.
    Biclique {
        a: usize,
        b: usize,
    },
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Path { edges } => write!(f, "P{edges}"),
            Shape::Cycle { length } => write!(f, "C{length}"),
            Shape::Biclique { a, b } => write!(f, "K{{{a},{b}}}"),
        }
    }
}

/// Every closed form that applies to `h`, cycles and paths first.
pub fn recognize(h: &Graph) -> Vec<Shape> {
    let n = h.n();
    let m = h.edge_count();
    let mut out = Vec::new();
    if n == 0 || !h.is_connected() {
        return out;
    }
    let degrees = h.degrees();
    if n >= 3 && m == n && degrees.iter().all(|&d| d == 2) {
        out.push(Shape::Cycle { length: n });
    }
    if m + 1 == n && degrees.iter().all(|&d| d <= 2) {
        out.push(Shape::Path { edges: m });
    }
    if n >= 2 {
        if let Ok(p) = PatternGraph::from_graph(h.clone()) {
            let a = p.part1().len();
            let b = p.part2().len();
            if a * b == m {
                out.push(Shape::Biclique {
                    a: a.max(b),
                    b: a.min(b),
                });
            }
        }
    }
    out
}

/// Closed-form count for the first recognized shape of `h`.
pub fn hom_count_closed_form(h: &Graph, g: &Graph) -> Result<HomCount> {
    let shape = *recognize(h).first().ok_or(Error::UnrecognizedShape)?;
    count_shape(shape, g, DEFAULT_SEQUENCE_CAP)
}

pub fn count_shape(shape: Shape, g: &Graph, sequence_cap: usize) -> Result<HomCount> {
    match shape {
        Shape::Path { edges } => Ok(path_count(g, edges)),
        Shape::Cycle { length } => Ok(cycle_count(g, length)),
        Shape::Biclique { a, b } => {
            let (a, b) = if b <= sequence_cap { (a, b) } else { (b, a) };
            if b > sequence_cap {
                return Err(Error::InvalidParameter(format!(
                    "K{{{a},{b}}} needs sequences longer than the cap {sequence_cap}"
                )));
            }
            Ok(biclique_count(g, a as u32, b as u32))
        }
    }
}

fn adjacency_lists(g: &Graph) -> Vec<Vec<u32>> {
    (0..g.n())
        .map(|v| g.neighbors(v).map(|u| u as u32).collect())
        .collect()
}

fn step<T: Acc>(adj: &[Vec<u32>], w: &[T]) -> Vec<T> {
    adj.iter()
        .map(|nb| {
            let mut s = T::zero();
            for &u in nb {
                s.add_ref(&w[u as usize]);
            }
            s
        })
        .collect()
}

/// Number of walks with `k` edges: `1ᵀ A^k 1`.
pub fn path_count(g: &Graph, k: usize) -> HomCount {
    if fits_u128(g.n() as u64, k as u32 + 1) {
        path_count_in::<u128>(g, k)
    } else {
        path_count_in::<BigUint>(g, k)
    }
}

fn path_count_in<T: Acc>(g: &Graph, k: usize) -> BigUint {
    let adj = adjacency_lists(g);
    let mut w = vec![T::one(); g.n()];
    for _ in 0..k {
        w = step(&adj, &w);
    }
    let mut total = T::zero();
    for x in &w {
        total.add_ref(x);
    }
    total.into_big()
}

/// Number of closed walks of length `k`: `tr A^k`.
pub fn cycle_count(g: &Graph, k: usize) -> HomCount {
    assert!(k >= 1);
    if fits_u128(g.n() as u64, k as u32 + 1) {
        cycle_count_in::<u128>(g, k)
    } else {
        cycle_count_in::<BigUint>(g, k)
    }
}

fn cycle_count_in<T: Acc>(g: &Graph, k: usize) -> BigUint {
    let n = g.n();
    let adj = adjacency_lists(g);
    let hi = k.div_ceil(2);
    let lo = k / 2;
    (0..n)
        .into_par_iter()
        .map(|u| {
            // rows of A^j at u for j = lo and j = hi
            let mut w: Vec<T> = (0..n)
                .map(|v| if v == u { T::one() } else { T::zero() })
                .collect();
            let mut at_lo = None;
            for j in 1..=hi {
                w = if j == 2 {
                    (0..n)
                        .map(|v| T::from_u64(g.codegree(u, v) as u64))
                        .collect()
                } else {
                    step(&adj, &w)
                };
                if j == lo {
                    at_lo = Some(w.clone());
                }
            }
            let w_lo = if lo == 0 {
                (0..n)
                    .map(|v| if v == u { T::one() } else { T::zero() })
                    .collect()
            } else {
                at_lo.unwrap()
            };
            let mut s = T::zero();
            for (a, b) in w.iter().zip(&w_lo) {
                if !a.is_zero() && !b.is_zero() {
                    s.add_ref(&a.mul_ref(b));
                }
            }
            s.into_big()
        })
        .reduce(BigUint::zero, |a, b| a + b)
}

/// `Σ_T |N(T)|^a` over all `N^b` sequences, enumerated literally.
pub fn biclique_count_sequences(g: &Graph, a: u32, b: u32) -> HomCount {
    let n = g.n();
    if b == 0 {
        return BigUint::from(n).pow(a);
    }
    if n == 0 {
        return BigUint::zero();
    }
    (0..n)
        .into_par_iter()
        .map(|first| {
            let mut total = BigUint::zero();
            let mut seq = vec![0; b as usize];
            seq[0] = first;
            loop {
                let size = g.common_neighborhood_len(&seq);
                total += BigUint::from(size).pow(a);
                // odometer over positions 1..b
                let mut i = b as usize - 1;
                loop {
                    if i == 0 {
                        return total;
                    }
                    seq[i] += 1;
                    if seq[i] < n {
                        break;
                    }
                    seq[i] = 0;
                    i -= 1;
                }
            }
        })
        .reduce(BigUint::zero, |x, y| x + y)
}

/// `Σ_T |N(T)|^a` grouped by the support set `U` of `T`: each `U` of size `j`
/// stands for `surj(b, j)` sequences. Supersets of a set with empty common
/// neighbourhood contribute nothing and are pruned.
pub fn biclique_count(g: &Graph, a: u32, b: u32) -> HomCount {
    let n = g.n();
    if b == 0 {
        return BigUint::from(n).pow(a);
    }
    if a == 0 {
        return BigUint::from(n).pow(b);
    }
    let weights: Vec<BigUint> = (0..=b).map(|j| surjections(b, j)).collect();
    (0..n)
        .into_par_iter()
        .map(|first| {
            let mut total = BigUint::zero();
            let start = g.neighbor_set(first);
            grow(g, a, b, &weights, first, &start, 1, &mut total);
            total
        })
        .reduce(BigUint::zero, |x, y| x + y)
}

#[allow(clippy::too_many_arguments)]
fn grow(
    g: &Graph,
    a: u32,
    b: u32,
    weights: &[BigUint],
    last: usize,
    common: &VertexSet,
    size: u32,
    total: &mut BigUint,
) {
    let c = common.len();
    if c == 0 {
        return;
    }
    *total += &weights[size as usize] * BigUint::from(c).pow(a);
    if size == b {
        return;
    }
    for next in last + 1..g.n() {
        let mut nc = common.clone();
        nc.and_row(g.row(next));
        grow(g, a, b, weights, next, &nc, size + 1, total);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homcount::brute::{hom_count_brute, DEFAULT_BRUTE_CAP};

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn star(k: usize) -> Graph {
        let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
        Graph::from_edges(k + 1, &edges).unwrap()
    }

    #[test]
    fn recognizes_shapes() {
        assert_eq!(
            recognize(&cycle(4)),
            vec![Shape::Cycle { length: 4 }, Shape::Biclique { a: 2, b: 2 }]
        );
        assert_eq!(
            recognize(&star(2)),
            vec![Shape::Path { edges: 2 }, Shape::Biclique { a: 2, b: 1 }]
        );
        assert_eq!(recognize(&star(3)), vec![Shape::Biclique { a: 3, b: 1 }]);
        assert_eq!(recognize(&Graph::empty(1)), vec![Shape::Path { edges: 0 }]);
        assert!(recognize(&Graph::empty(2)).is_empty());
        assert!(recognize(&cycle(6).disjoint_union(&cycle(4))).is_empty());
    }

    #[test]
    fn examples() {
        assert_eq!(cycle_count(&cycle(5), 4), BigUint::from(30u32));
        // Σ_v |N(v)|² on the 2-leaf star: 4 + 1 + 1
        assert_eq!(biclique_count(&star(2), 2, 1), BigUint::from(6u32));
        for k in 1..=6 {
            assert_eq!(path_count(&star(k), 3), BigUint::from(2 * k * k));
        }
    }

    #[test]
    fn complete_graph_c4() {
        // eigenvalues N-1 and -1 (N-1 times)
        for n in 2..8u64 {
            let expect = (n - 1).pow(4) + (n - 1);
            assert_eq!(
                cycle_count(&Graph::complete(n as usize), 4),
                BigUint::from(expect)
            );
        }
    }

    #[test]
    fn biclique_routes_agree() {
        let g = cycle(5).disjoint_union(&Graph::complete(4));
        for a in 0..=3 {
            for b in 0..=3 {
                assert_eq!(
                    biclique_count(&g, a, b),
                    biclique_count_sequences(&g, a, b),
                    "a={a} b={b}"
                );
            }
        }
    }

    #[test]
    fn closed_forms_match_brute() {
        let g = cycle(6).disjoint_union(&star(3));
        for h in [cycle(4), cycle(6), star(3), cycle(3)] {
            for shape in recognize(&h) {
                assert_eq!(
                    count_shape(shape, &g, DEFAULT_SEQUENCE_CAP).unwrap(),
                    hom_count_brute(&h, &g, DEFAULT_BRUTE_CAP).unwrap(),
                    "{shape}"
                );
            }
        }
    }

    #[test]
    fn unrecognized() {
        let h = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        assert_eq!(
            hom_count_closed_form(&h, &cycle(4)),
            Err(Error::UnrecognizedShape)
        );
    }
}
