//! Simple undirected graphs stored as adjacency bit rows.

use std::collections::VecDeque;
use std::fmt;

use crate::bitset::{popcount_and, words_for, Ones, VertexSet, WORD_BITS};
use crate::error::{Error, Result};

/// Default cap on the number of vertices a materialized tensor power may have.
pub const DEFAULT_VERTEX_BUDGET: u64 = 100_000;

/// A simple undirected graph on vertices `0..n`.
///
/// Row `v` of the adjacency matrix is stored as `stride` packed words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    stride: usize,
    bits: Vec<u64>,
    edge_count: usize,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let stride = words_for(n);
        Graph {
            n,
            stride,
            bits: vec![0; n * stride],
            edge_count: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.set_edge(u, v, true);
            }
        }
        g
    }

    /// Builds a graph from an edge list. Duplicate pairs (in either orientation) collapse.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { u, v, n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub(crate) fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.stride..(v + 1) * self.stride]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && (self.row(u)[v / WORD_BITS] >> (v % WORD_BITS)) & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> Ones<'_> {
        Ones::new(self.row(v))
    }

    pub fn neighbor_set(&self, v: usize) -> VertexSet {
        VertexSet::from_words(self.n, self.row(v).to_vec())
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Number of common neighbours of `u` and `v` (the degree of `u` when `u == v`).
    #[inline]
    pub fn codegree(&self, u: usize, v: usize) -> usize {
        popcount_and(self.row(u), self.row(v)) as usize
    }

    pub fn is_regular(&self) -> bool {
        let mut it = (0..self.n).map(|v| self.degree(v));
        match it.next() {
            None => true,
            Some(d) => it.all(|x| x == d),
        }
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in 0..self.n {
            out.extend(self.neighbors(u).filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub(crate) fn set_edge(&mut self, u: usize, v: usize, on: bool) {
        debug_assert!(u != v && u < self.n && v < self.n);
        let present = self.has_edge(u, v);
        if present == on {
            return;
        }
        let (wu, bu) = (u * self.stride + v / WORD_BITS, v % WORD_BITS);
        let (wv, bv) = (v * self.stride + u / WORD_BITS, u % WORD_BITS);
        self.bits[wu] ^= 1 << bu;
        self.bits[wv] ^= 1 << bv;
        if on {
            self.edge_count += 1;
        } else {
            self.edge_count -= 1;
        }
    }

    pub(crate) fn toggle_edge(&mut self, u: usize, v: usize) {
        let on = !self.has_edge(u, v);
        self.set_edge(u, v, on);
    }

    /// Common neighbourhood `N(S)`: vertices adjacent to every entry of `seq`.
    ///
    /// The empty sequence yields every vertex.
    pub fn common_neighborhood(&self, seq: &[usize]) -> Result<VertexSet> {
        if let Some(&bad) = seq.iter().find(|&&v| v >= self.n) {
            return Err(Error::SequenceOutOfRange {
                vertex: bad,
                n: self.n,
            });
        }
        Ok(self.common_neighborhood_unchecked(seq))
    }

    pub(crate) fn common_neighborhood_unchecked(&self, seq: &[usize]) -> VertexSet {
        let mut set = VertexSet::full(self.n);
        for &v in seq {
            set.and_row(self.row(v));
        }
        set
    }

    /// Size of `N(S)` without allocating when `seq` is short.
    pub(crate) fn common_neighborhood_len(&self, seq: &[usize]) -> usize {
        match seq {
            [] => self.n,
            [a] => self.degree(*a),
            [a, b] => self.codegree(*a, *b),
            _ => self.common_neighborhood_unchecked(seq).len(),
        }
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.set_edge(u, v, true);
                }
            }
        }
        g
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut g = Graph::empty(self.n + other.n);
        for (u, v) in self.edges() {
            g.set_edge(u, v, true);
        }
        for (u, v) in other.edges() {
            g.set_edge(u + self.n, v + self.n, true);
        }
        g
    }

    /// Subgraph induced on `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::empty(vertices.len());
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    g.set_edge(i, j, true);
                }
            }
        }
        g
    }

    /// Applies `perm`, sending vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.set_edge(perm[u], perm[v], true);
        }
        g
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Tensor (categorical) product: `(u1, u2) ~ (v1, v2)` iff `u1 ~ v1` and `u2 ~ v2`.
    ///
    /// Pair `(u1, u2)` is vertex `u1 * other.n() + u2`.
    pub fn tensor_product(&self, other: &Graph, vertex_budget: u64) -> Result<Graph> {
        let total = self.n as u128 * other.n as u128;
        if total > vertex_budget as u128 {
            return Err(Error::VertexBudget {
                what: "tensor product",
                requested: total,
                budget: vertex_budget,
            });
        }
        if self.n == 0 || other.n == 0 {
            return Err(Error::EmptyGraph);
        }
        let m = other.n;
        let mut g = Graph::empty(self.n * m);
        for (u1, v1) in self.edges() {
            for u2 in 0..m {
                for v2 in other.neighbors(u2) {
                    // (u2, v2) runs over ordered pairs, so both orientations are covered
                    g.set_edge(u1 * m + u2, v1 * m + v2, true);
                }
            }
        }
        Ok(g)
    }

    /// `G^s = G × G × ... × G` (`s ≥ 1` factors).
    pub fn tensor_power(&self, s: u32, vertex_budget: u64) -> Result<Graph> {
        if s == 0 {
            return Err(Error::InvalidParameter("tensor power needs s >= 1".into()));
        }
        let total = (self.n as u128).checked_pow(s).unwrap_or(u128::MAX);
        if total > vertex_budget as u128 {
            return Err(Error::VertexBudget {
                what: "tensor power",
                requested: total,
                budget: vertex_budget,
            });
        }
        let mut acc = self.clone();
        for _ in 1..s {
            acc = acc.tensor_product(self, vertex_budget)?;
        }
        Ok(acc)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// An ordered list of host vertices; repetitions are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSequence(Vec<usize>);

impl VertexSequence {
    pub fn new(entries: Vec<usize>, host: &Graph) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&v| v >= host.n()) {
            return Err(Error::SequenceOutOfRange {
                vertex: bad,
                n: host.n(),
            });
        }
        Ok(VertexSequence(entries))
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
