//! Hypergraph embeddings into strongly directed hypergraphs.

use std::collections::HashSet;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::serialize_big;
use crate::graph::Graph;

/// Largest `N^k` [`hyper_embed_count`] will enumerate.
pub const HYPER_BUDGET: u128 = 50_000_000;

/// Hypergraph on `0..vertices` with distinct, sorted, nonempty edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypergraph {
    vertices: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(vertices: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let mut clean: Vec<Vec<usize>> = Vec::new();
        for mut e in edges {
            e.sort_unstable();
            e.dedup();
            if e.is_empty() {
                return Err(Error::InvalidParameter(
                    "hypergraph edges must be nonempty".into(),
                ));
            }
            if let Some(&v) = e.iter().find(|&&v| v >= vertices) {
                return Err(Error::SequenceOutOfRange {
                    vertex: v,
                    n: vertices,
                });
            }
            if !clean.contains(&e) {
                clean.push(e);
            }
        }
        Ok(Hypergraph {
            vertices,
            edges: clean,
        })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn min_edge_size(&self) -> Option<usize> {
        self.edges.iter().map(Vec::len).min()
    }
}

/// Edges are vertex sequences: `is_edge` is asked about sequences over
/// `0..vertex_count()`.
pub trait SequenceHypergraph {
    fn vertex_count(&self) -> usize;
    fn is_edge(&self, seq: &[usize]) -> bool;
}

/// Edge set given extensionally.
#[derive(Clone, Debug, Default)]
pub struct ExplicitSeqHypergraph {
    pub vertices: usize,
    pub edges: HashSet<Vec<usize>>,
}

impl SequenceHypergraph for ExplicitSeqHypergraph {
    fn vertex_count(&self) -> usize {
        self.vertices
    }
    fn is_edge(&self, seq: &[usize]) -> bool {
        self.edges.contains(seq)
    }
}

impl<F: Fn(&[usize]) -> bool> SequenceHypergraph for (usize, F) {
    fn vertex_count(&self) -> usize {
        self.0
    }
    fn is_edge(&self, seq: &[usize]) -> bool {
        (self.1)(seq)
    }
}

/// `R` is an edge iff `|N_G(R)| >= edge_min[|R|]`; sequence entries index `vertices`.
#[derive(Clone, Debug)]
pub struct ThresholdSeqHypergraph<'g> {
    pub graph: &'g Graph,
    pub vertices: Vec<usize>,
    pub edge_min: Vec<usize>,
}

impl SequenceHypergraph for ThresholdSeqHypergraph<'_> {
    fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
    fn is_edge(&self, seq: &[usize]) -> bool {
        let image: Vec<usize> = seq.iter().map(|&i| self.vertices[i]).collect();
        self.graph.common_neighborhood_len(&image) >= self.edge_min[seq.len()]
    }
}

/// Maps `0..h -> 0..big_n` sending every edge onto an edge; each edge is checked
/// as soon as its largest vertex is assigned, with the image in edge order.
pub(crate) fn count_embeddings(
    h: usize,
    edges: &[Vec<usize>],
    big_n: usize,
    is_edge: &mut dyn FnMut(&[usize]) -> bool,
) -> u128 {
    let mut closing: Vec<Vec<&[usize]>> = vec![Vec::new(); h];
    for e in edges {
        closing[*e.last().expect("nonempty")].push(e);
    }
    fn go(
        v: usize,
        f: &mut Vec<usize>,
        closing: &[Vec<&[usize]>],
        big_n: usize,
        is_edge: &mut dyn FnMut(&[usize]) -> bool,
        image: &mut Vec<usize>,
    ) -> u128 {
        if v == closing.len() {
            return 1;
        }
        let mut total = 0;
        for x in 0..big_n {
            f.push(x);
            let ok = closing[v].iter().all(|e| {
                image.clear();
                image.extend(e.iter().map(|&u| f[u]));
                is_edge(image)
            });
            if ok {
                total += go(v + 1, f, closing, big_n, is_edge, image);
            }
            f.pop();
        }
        total
    }
    go(
        0,
        &mut Vec::with_capacity(h),
        &closing,
        big_n,
        is_edge,
        &mut Vec::new(),
    )
}

/// Non-edge tally for sequences of one length.
#[derive(Clone, Debug, Serialize)]
pub struct KHypothesis {
    pub k: usize,
    pub non_edges: u128,
    /// `N^k / (2e)` as the exact test `2 e · non_edges <= N^k`.
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbedReport {
    pub h: usize,
    pub e: usize,
    /// Smallest edge size, `None` without edges.
    pub d: Option<usize>,
    pub big_n: usize,
    #[serde(serialize_with = "serialize_big")]
    pub count: BigUint,
    #[serde(serialize_with = "serialize_big")]
    pub all_maps: BigUint,
    pub per_k: Vec<KHypothesis>,
    pub hypothesis: bool,
    /// `2 · count >= N^h`.
    pub conclusion: bool,
}

pub fn hyper_embed_count(hg: &Hypergraph, target: &dyn SequenceHypergraph) -> Result<EmbedReport> {
    let h = hg.vertices();
    let big_n = target.vertex_count();
    let all = (big_n as u128).checked_pow(h as u32).unwrap_or(u128::MAX);
    if all > HYPER_BUDGET {
        return Err(Error::EnumerationBudget {
            requested: all,
            budget: HYPER_BUDGET,
            hint: "",
        });
    }
    let e = hg.edges().len();
    let d = hg.min_edge_size();
    let mut per_k = Vec::new();
    if let Some(d) = d {
        for k in d..=h {
            let total = (big_n as u128).pow(k as u32);
            let mut seq = vec![0usize; k];
            let mut non_edges = 0u128;
            for code in 0..total {
                let mut rest = code;
                for slot in seq.iter_mut().rev() {
                    *slot = (rest % big_n as u128) as usize;
                    rest /= big_n as u128;
                }
                if !target.is_edge(&seq) {
                    non_edges += 1;
                }
            }
            per_k.push(KHypothesis {
                k,
                non_edges,
                holds: 2 * e as u128 * non_edges <= total,
            });
        }
    }
    let count = count_embeddings(h, hg.edges(), big_n, &mut |s| target.is_edge(s));
    Ok(EmbedReport {
        h,
        e,
        d,
        big_n,
        count: BigUint::from(count),
        all_maps: BigUint::from(all),
        hypothesis: per_k.iter().all(|k| k.holds),
        conclusion: 2 * count >= all,
        per_k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_edges_counts_everything() {
        let hg = Hypergraph::new(2, vec![]).unwrap();
        let rep = hyper_embed_count(&hg, &(3, |_: &[usize]| false)).unwrap();
        assert_eq!(rep.count, BigUint::from(9u32));
        assert!(rep.hypothesis && rep.conclusion);
    }

    #[test]
    fn distinct_pairs() {
        let hg = Hypergraph::new(2, vec![vec![0, 1]]).unwrap();
        let rep = hyper_embed_count(&hg, &(3, |s: &[usize]| s[0] != s[1])).unwrap();
        assert_eq!(rep.count, BigUint::from(6u32));
        assert_eq!(rep.per_k.len(), 1);
        assert_eq!(rep.per_k[0].non_edges, 3);
        assert!(rep.hypothesis && rep.conclusion);
    }

    #[test]
    fn all_edges_and_explicit() {
        let hg = Hypergraph::new(2, vec![vec![1, 0]]).unwrap();
        for n in 1..5 {
            let rep = hyper_embed_count(&hg, &(n, |_: &[usize]| true)).unwrap();
            assert_eq!(rep.count, BigUint::from(n * n));
        }
        let target = ExplicitSeqHypergraph {
            vertices: 2,
            edges: [vec![0, 1]].into_iter().collect(),
        };
        // edge {0,1} is read in sorted order, so only f = (0, 1) works
        assert_eq!(
            hyper_embed_count(&hg, &target).unwrap().count,
            BigUint::from(1u32)
        );
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Hypergraph::new(2, vec![vec![]]).is_err());
        assert!(Hypergraph::new(2, vec![vec![2]]).is_err());
        assert_eq!(
            Hypergraph::new(3, vec![vec![1, 0], vec![0, 1]])
                .unwrap()
                .edges()
                .len(),
            1
        );
    }
}
