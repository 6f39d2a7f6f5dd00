//! Backtracking homomorphism and injective-homomorphism counts.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::exact::{fits_u128, Acc, HomCount};
use crate::graph::Graph;

pub const DEFAULT_BRUTE_CAP: usize = 10;

/// Pattern vertices in a connected-first search order, each with the earlier
/// positions it is adjacent to.
pub(crate) struct SearchOrder {
    pub order: Vec<usize>,
    pub back: Vec<Vec<usize>>,
}

impl SearchOrder {
    pub fn new(h: &Graph) -> Self {
        let n = h.n();
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                order.push(u);
                for v in h.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let back = order
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let mut b: Vec<usize> = h.neighbors(v).map(|u| pos[u]).filter(|&p| p < i).collect();
                b.sort_unstable();
                b
            })
            .collect();
        SearchOrder { order, back }
    }
}

/// Counts all adjacency-preserving maps `V(H) -> V(G)` by backtracking, with
/// candidate sets taken from common neighbourhoods of already-placed neighbours.
pub fn hom_count_brute(h: &Graph, g: &Graph, cap: usize) -> Result<HomCount> {
    if h.n() > cap {
        return Err(Error::BruteCap { size: h.n(), cap });
    }
    if h.n() == 0 {
        return Ok(BigUint::from(1u32));
    }
    if g.n() == 0 {
        return Ok(BigUint::zero());
    }
    let search = SearchOrder::new(h);
    // every partial sum is bounded by N^{|H|}
    if fits_u128(g.n() as u64, h.n() as u32) {
        Ok(run::<u128>(&search, g, false))
    } else {
        Ok(run::<BigUint>(&search, g, false))
    }
}

/// Counts injective homomorphisms (copies counted with labels).
pub fn injective_count(h: &Graph, g: &Graph) -> HomCount {
    if h.n() == 0 {
        return BigUint::from(1u32);
    }
    if g.n() < h.n() {
        return BigUint::zero();
    }
    let search = SearchOrder::new(h);
    if fits_u128(g.n() as u64, h.n() as u32) {
        run::<u128>(&search, g, true)
    } else {
        run::<BigUint>(&search, g, true)
    }
}

fn run<T: Acc>(search: &SearchOrder, g: &Graph, injective: bool) -> BigUint {
    let n = g.n();
    (0..n)
        .into_par_iter()
        .map(|x| {
            let mut images = vec![0usize; search.order.len()];
            images[0] = x;
            let mut used = VertexSet::empty(n);
            if injective {
                used.insert(x);
            }
            let mut acc = T::zero();
            extend(search, g, injective, 1, &mut images, &mut used, &mut acc);
            acc.into_big()
        })
        .reduce(BigUint::zero, |a, b| a + b)
}

fn candidates(search: &SearchOrder, g: &Graph, depth: usize, images: &[usize]) -> VertexSet {
    let mut set = VertexSet::full(g.n());
    for &p in &search.back[depth] {
        set.and_row(g.row(images[p]));
    }
    set
}

fn extend<T: Acc>(
    search: &SearchOrder,
    g: &Graph,
    injective: bool,
    depth: usize,
    images: &mut [usize],
    used: &mut VertexSet,
    acc: &mut T,
) {
    let k = search.order.len();
    if depth == k {
        acc.add_ref(&T::one());
        return;
    }
    let mut cand = candidates(search, g, depth, images);
    if injective {
        for v in used.iter() {
            cand.remove(v);
        }
    }
    if depth + 1 == k {
        acc.add_ref(&T::from_u64(cand.len() as u64));
        return;
    }
    for v in cand.iter() {
        images[depth] = v;
        if injective {
            used.insert(v);
        }
        extend(search, g, injective, depth + 1, images, used, acc);
        if injective {
            used.remove(v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(k: usize) -> Graph {
        let edges: Vec<_> = (0..k).map(|i| (i, i + 1)).collect();
        Graph::from_edges(k + 1, &edges).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn star(k: usize) -> Graph {
        let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
        Graph::from_edges(k + 1, &edges).unwrap()
    }

    fn count(h: &Graph, g: &Graph) -> u64 {
        hom_count_brute(h, g, DEFAULT_BRUTE_CAP)
            .unwrap()
            .try_into()
            .unwrap()
    }

    /// Plain enumeration of all N^k maps.
    fn oracle(h: &Graph, g: &Graph) -> u64 {
        let (k, n) = (h.n(), g.n());
        let mut total = 0;
        let mut f = vec![0usize; k];
        'outer: loop {
            if h.edges().iter().all(|&(a, b)| g.has_edge(f[a], f[b])) {
                total += 1;
            }
            for slot in f.iter_mut() {
                *slot += 1;
                if *slot < n {
                    continue 'outer;
                }
                *slot = 0;
            }
            break;
        }
        total
    }

    #[test]
    fn small_examples() {
        let k3 = Graph::complete(3);
        assert_eq!(count(&Graph::complete(2), &k3), 6);
        assert_eq!(count(&cycle(4), &k3), 18);
        assert_eq!(count(&path(2), &star(2)), 6);
    }

    #[test]
    fn agrees_with_plain_enumeration() {
        let hosts = [cycle(5), star(3), Graph::complete(4), path(4)];
        let patterns = [path(3), cycle(4), star(3), Graph::empty(2), cycle(3)];
        for h in &patterns {
            for g in &hosts {
                assert_eq!(count(h, g), oracle(h, g), "{h:?} -> {g:?}");
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = hom_count_brute(&path(11), &Graph::complete(2), 10).unwrap_err();
        assert_eq!(err, Error::BruteCap { size: 12, cap: 10 });
    }

    #[test]
    fn injective_examples() {
        let k3 = Graph::complete(3);
        assert_eq!(
            injective_count(&Graph::complete(2), &k3),
            BigUint::from(6u32)
        );
        assert_eq!(injective_count(&cycle(4), &cycle(4)), BigUint::from(8u32));
        assert_eq!(injective_count(&cycle(4), &k3), BigUint::zero());
    }
}
