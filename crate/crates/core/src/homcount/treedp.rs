//! Homomorphism counting by variable elimination along an optimal elimination
//! order of the pattern, i.e. dynamic programming over a tree decomposition.
//!
//! Eliminating pattern vertex `v` multiplies every factor that mentions `v`, sums
//! `v` out, and leaves a table over the remaining neighbours of `v` in the fill
//! graph. Edge factors are never tabulated: they restrict the candidates for `v` to
//! a common neighbourhood computed with bit rows.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::exact::{fits_u128, Acc, HomCount};
use crate::graph::Graph;

use super::brute::hom_count_brute;

/// Largest pattern for which the exact elimination-order search runs.
pub const MAX_DECOMPOSITION_VERTICES: usize = 16;
pub const DEFAULT_MAX_WIDTH: usize = 4;
/// Cap on the number of entries of a single intermediate table.
pub const DEFAULT_TABLE_BUDGET: u128 = 1 << 26;

/// An elimination order and the width of the induced tree decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub order: Vec<usize>,
    pub width: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeDpOutcome {
    #[serde(serialize_with = "crate::exact::serialize_big")]
    pub count: HomCount,
    pub decomposition: Option<Decomposition>,
    /// Set when the count came from another engine.
    pub fallback: Option<String>,
}

/// Exact treewidth and an optimal elimination order by dynamic programming over
/// vertex subsets: `TW(S) = min_{v in S} max(TW(S - v), |Q(S - v, v)|)`, where
/// `Q(S, v)` are the vertices outside `S + v` reachable from `v` through `S`.
pub fn elimination_order(h: &Graph) -> Result<Decomposition> {
    let n = h.n();
    if n > MAX_DECOMPOSITION_VERTICES {
        return Err(Error::InvalidParameter(format!(
            "exact decomposition search supports at most {MAX_DECOMPOSITION_VERTICES} vertices, pattern has {n}"
        )));
    }
    if n == 0 {
        return Ok(Decomposition {
            order: vec![],
            width: 0,
        });
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| h.neighbors(v).fold(0u32, |m, u| m | (1 << u)))
        .collect();
    let full = (1u32 << n) - 1;
    let q_size = |s: u32, v: usize| -> usize {
        // vertices outside s ∪ {v} reachable from v via internal vertices in s
        let mut reached = 0u32;
        let mut inside = 1u32 << v;
        let mut frontier = 1u32 << v;
        while frontier != 0 {
            let mut next = 0u32;
            let mut f = frontier;
            while f != 0 {
                let x = f.trailing_zeros() as usize;
                f &= f - 1;
                let nb = adj[x];
                reached |= nb & !s & !(1 << v);
                next |= nb & s & !inside;
            }
            inside |= next;
            frontier = next;
        }
        reached.count_ones() as usize
    };
    let size = 1usize << n;
    let mut tw = vec![usize::MAX; size];
    let mut choice = vec![0u8; size];
    tw[0] = 0;
    for s in 1..size as u32 {
        let mut best = usize::MAX;
        let mut arg = 0;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = s & !(1 << v);
            let cand = tw[rest as usize].max(q_size(rest, v));
            if cand < best {
                best = cand;
                arg = v;
            }
        }
        tw[s as usize] = best;
        choice[s as usize] = arg as u8;
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = choice[s as usize] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    Ok(Decomposition {
        order,
        width: tw[full as usize],
    })
}

enum Factor<T> {
    Edge(usize, usize),
    Table { scope: Vec<usize>, data: Vec<T> },
}

impl<T> Factor<T> {
    fn mentions(&self, v: usize) -> bool {
        match self {
            Factor::Edge(a, b) => *a == v || *b == v,
            Factor::Table { scope, .. } => scope.contains(&v),
        }
    }
}

/// Counts homomorphisms along `decomposition`, using at most `table_budget` entries
/// per intermediate table.
pub fn count_with_decomposition(
    h: &Graph,
    g: &Graph,
    decomposition: &Decomposition,
    table_budget: u128,
) -> Result<HomCount> {
    if h.n() == 0 {
        return Ok(BigUint::one());
    }
    if g.n() == 0 {
        return Ok(BigUint::zero());
    }
    let entries = (g.n() as u128).saturating_pow(decomposition.width as u32);
    if entries > table_budget {
        return Err(Error::EnumerationBudget {
            requested: entries,
            budget: table_budget,
            hint: " (intermediate table)",
        });
    }
    // every table entry counts partial maps, bounded by N^{|H|}
    if fits_u128(g.n() as u64, h.n() as u32) {
        Ok(eliminate::<u128>(h, g, &decomposition.order))
    } else {
        Ok(eliminate::<BigUint>(h, g, &decomposition.order))
    }
}

fn eliminate<T: Acc>(h: &Graph, g: &Graph, order: &[usize]) -> BigUint {
    let n = g.n();
    let mut factors: Vec<Factor<T>> = h
        .edges()
        .into_iter()
        .map(|(a, b)| Factor::Edge(a, b))
        .collect();
    let mut scalar = T::one();
    for &v in order {
        let (involved, rest): (Vec<_>, Vec<_>) = factors.into_iter().partition(|f| f.mentions(v));
        factors = rest;

        let mut scope: Vec<usize> = Vec::new();
        for f in &involved {
            match f {
                Factor::Edge(a, b) => scope.push(if *a == v { *b } else { *a }),
                Factor::Table { scope: s, .. } => {
                    scope.extend(s.iter().copied().filter(|&x| x != v))
                }
            }
        }
        scope.sort_unstable();
        scope.dedup();
        let pos_of = |x: usize| scope.iter().position(|&y| y == x).unwrap();

        let edge_pos: Vec<usize> = involved
            .iter()
            .filter_map(|f| match f {
                Factor::Edge(a, b) => Some(pos_of(if *a == v { *b } else { *a })),
                _ => None,
            })
            .collect();
        // per table: (data, [(position in scope, stride)], stride of v)
        let tables: Vec<(&[T], Vec<(usize, usize)>, usize)> = involved
            .iter()
            .filter_map(|f| match f {
                Factor::Table { scope: s, data } => {
                    let mut stride = 1usize;
                    let mut strides = vec![0usize; s.len()];
                    for i in (0..s.len()).rev() {
                        strides[i] = stride;
                        stride *= n;
                    }
                    let mut map = Vec::new();
                    let mut v_stride = 0;
                    for (i, &x) in s.iter().enumerate() {
                        if x == v {
                            v_stride = strides[i];
                        } else {
                            map.push((pos_of(x), strides[i]));
                        }
                    }
                    Some((data.as_slice(), map, v_stride))
                }
                _ => None,
            })
            .collect();

        let k = scope.len();
        let total = n.pow(k as u32);
        let chunk = if k == 0 { 1 } else { n };
        let mut data = vec![T::zero(); total];
        data.par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(ci, out)| {
                let mut assign = vec![0usize; k];
                // decode the chunk prefix; the last coordinate runs over the chunk
                let mut idx = ci;
                for i in (0..k.saturating_sub(1)).rev() {
                    assign[i] = idx % n;
                    idx /= n;
                }
                for (j, slot) in out.iter_mut().enumerate() {
                    if k > 0 {
                        assign[k - 1] = j;
                    }
                    let mut cand = VertexSet::full(n);
                    for &p in &edge_pos {
                        cand.and_row(g.row(assign[p]));
                    }
                    if tables.is_empty() {
                        *slot = T::from_u64(cand.len() as u64);
                        continue;
                    }
                    let bases: Vec<usize> = tables
                        .iter()
                        .map(|(_, map, _)| map.iter().map(|&(p, s)| assign[p] * s).sum())
                        .collect();
                    let mut sum = T::zero();
                    for x in cand.iter() {
                        let mut prod = T::one();
                        for (t, (table, _, vs)) in tables.iter().enumerate() {
                            let val = &table[bases[t] + x * vs];
                            if val.is_zero() {
                                prod = T::zero();
                                break;
                            }
                            prod = prod.mul_ref(val);
                        }
                        sum.add_ref(&prod);
                    }
                    *slot = sum;
                }
            });
        if k == 0 {
            scalar = scalar.mul_ref(&data[0]);
        } else {
            factors.push(Factor::Table { scope, data });
        }
    }
    debug_assert!(factors.is_empty());
    scalar.into_big()
}

/// Tree-decomposition engine with the default limits. Falls back to backtracking,
/// with a notice, when no decomposition of width at most `max_width` exists.
pub fn hom_count_treedp(h: &Graph, g: &Graph) -> Result<TreeDpOutcome> {
    hom_count_treedp_with(
        h,
        g,
        DEFAULT_MAX_WIDTH,
        DEFAULT_TABLE_BUDGET,
        super::brute::DEFAULT_BRUTE_CAP,
    )
}

pub fn hom_count_treedp_with(
    h: &Graph,
    g: &Graph,
    max_width: usize,
    table_budget: u128,
    brute_cap: usize,
) -> Result<TreeDpOutcome> {
    let fallback = |reason: String| -> Result<TreeDpOutcome> {
        let count = hom_count_brute(h, g, brute_cap)?;
        Ok(TreeDpOutcome {
            count,
            decomposition: None,
            fallback: Some(format!("{reason}; counted by backtracking instead")),
        })
    };
    let dec = match elimination_order(h) {
        Ok(d) => d,
        Err(e) => return fallback(e.to_string()),
    };
    if dec.width > max_width {
        return fallback(format!(
            "pattern treewidth {} exceeds the limit {max_width}",
            dec.width
        ));
    }
    let count = count_with_decomposition(h, g, &dec, table_budget)?;
    Ok(TreeDpOutcome {
        count,
        decomposition: Some(dec),
        fallback: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homcount::brute::DEFAULT_BRUTE_CAP;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn biclique(a: usize, b: usize) -> Graph {
        let mut e = vec![];
        for i in 0..a {
            for j in 0..b {
                e.push((i, a + j));
            }
        }
        Graph::from_edges(a + b, &e).unwrap()
    }

    #[test]
    fn treewidths() {
        assert_eq!(elimination_order(&Graph::empty(3)).unwrap().width, 0);
        assert_eq!(
            elimination_order(&Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap())
                .unwrap()
                .width,
            1
        );
        assert_eq!(elimination_order(&cycle(6)).unwrap().width, 2);
        assert_eq!(elimination_order(&biclique(3, 3)).unwrap().width, 3);
        assert_eq!(elimination_order(&Graph::complete(5)).unwrap().width, 4);
    }

    #[test]
    fn examples() {
        let k3 = Graph::complete(3);
        let c = hom_count_treedp(&cycle(4), &k3).unwrap();
        assert_eq!(c.count, BigUint::from(18u32));
        assert!(c.fallback.is_none());

        let c6 = cycle(6);
        let brute = hom_count_brute(&c6, &c6, DEFAULT_BRUTE_CAP).unwrap();
        let dp = hom_count_treedp(&c6, &c6).unwrap().count;
        assert_eq!(dp, brute);
        // closed 6-walks on C6: sum of (2cos(2πj/6))^6 = 64+1+1+64+1+1
        assert_eq!(dp, BigUint::from(132u32));

        let g = cycle(7).disjoint_union(&k3);
        let k2 = Graph::complete(2);
        assert_eq!(
            hom_count_treedp(&k2, &g).unwrap().count,
            BigUint::from(2 * g.edge_count() as u32)
        );
    }

    #[test]
    fn falls_back_past_width_limit() {
        let k6 = Graph::complete(6);
        let out =
            hom_count_treedp_with(&k6, &Graph::complete(6), 4, DEFAULT_TABLE_BUDGET, 10).unwrap();
        assert!(out.fallback.is_some());
        assert_eq!(out.count, BigUint::from(720u32));
    }

    #[test]
    fn isolated_pattern_vertices() {
        let h = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let g = cycle(5);
        assert_eq!(
            hom_count_treedp(&h, &g).unwrap().count,
            BigUint::from(10u32 * 5)
        );
    }
}
