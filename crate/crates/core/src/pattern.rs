//! Bipartite patterns `H = (V1, V2, E)` and the structural invariants that the
//! density bounds are keyed on: width, complete-side parameters and leaf stripping.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    First,
    Second,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::First => Side::Second,
            Side::Second => Side::First,
        }
    }
}

/// A bipartite pattern with a fixed bipartition.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PatternGraph {
    graph: Graph,
    side: Vec<Side>,
}

/// Parameters for the complete-side bound: `r` vertices on `side` are adjacent to the
/// whole opposite side and every vertex on `side` has degree at least `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CompleteSide {
    pub side: Side,
    pub r: usize,
    pub d: usize,
}

impl PatternGraph {
    /// Builds a pattern. Without a declared partition a proper 2-colouring is computed
    /// per connected component (each component's smallest vertex goes to the first part).
    pub fn from_edges(
        n: usize,
        edges: &[(usize, usize)],
        declared: Option<(Vec<usize>, Vec<usize>)>,
    ) -> Result<Self> {
        let graph = Graph::from_edges(n, edges)?;
        match declared {
            Some((p1, p2)) => PatternGraph::with_parts(graph, &p1, &p2),
            None => PatternGraph::from_graph(graph),
        }
    }

    /// 2-colours `graph`, rejecting it with an odd cycle when that is impossible.
    pub fn from_graph(graph: Graph) -> Result<Self> {
        let n = graph.n();
        let mut color: Vec<Option<Side>> = vec![None; n];
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![0usize; n];
        for s in 0..n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(Side::First);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for v in graph.neighbors(u) {
                    match color[v] {
                        None => {
                            color[v] = Some(cu.other());
                            parent[v] = u;
                            depth[v] = depth[u] + 1;
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => {
                            return Err(Error::NotBipartite {
                                cycle: odd_cycle(&parent, &depth, u, v),
                            });
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        Ok(PatternGraph {
            graph,
            side: color.into_iter().map(Option::unwrap).collect(),
        })
    }

    /// Uses a declared bipartition, which must cover every vertex exactly once and
    /// put the endpoints of every edge on opposite sides.
    pub fn with_parts(graph: Graph, part1: &[usize], part2: &[usize]) -> Result<Self> {
        let n = graph.n();
        let mut side: Vec<Option<Side>> = vec![None; n];
        for (list, s) in [(part1, Side::First), (part2, Side::Second)] {
            for &v in list {
                if v >= n {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {v} is outside 0..{n}"
                    )));
                }
                if side[v].is_some() {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {v} is listed twice"
                    )));
                }
                side[v] = Some(s);
            }
        }
        if let Some(v) = side.iter().position(Option::is_none) {
            return Err(Error::InvalidPartition(format!(
                "vertex {v} is in neither part"
            )));
        }
        let side: Vec<Side> = side.into_iter().map(Option::unwrap).collect();
        if let Some((u, v)) = graph.edges().into_iter().find(|&(u, v)| side[u] == side[v]) {
            return Err(Error::InvalidPartition(format!(
                "edge ({u}, {v}) lies inside one part"
            )));
        }
        Ok(PatternGraph { graph, side })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Number of edges `m`.
    pub fn m(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn side_of(&self, v: usize) -> Side {
        self.side[v]
    }

    pub fn part(&self, side: Side) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.side[v] == side).collect()
    }

    pub fn part1(&self) -> Vec<usize> {
        self.part(Side::First)
    }

    pub fn part2(&self) -> Vec<usize> {
        self.part(Side::Second)
    }

    /// Edges as `(i, j)` with `i` in the first part and `j` in the second.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.graph
            .edges()
            .into_iter()
            .map(|(u, v)| {
                if self.side[u] == Side::First {
                    (u, v)
                } else {
                    (v, u)
                }
            })
            .collect()
    }

    /// Same graph with the two parts exchanged.
    pub fn swapped(&self) -> PatternGraph {
        PatternGraph {
            graph: self.graph.clone(),
            side: self.side.iter().map(|s| s.other()).collect(),
        }
    }

    /// Sub-pattern induced on `vertices` (relabelled `0..len`), keeping sides.
    pub fn induced(&self, vertices: &[usize]) -> PatternGraph {
        PatternGraph {
            graph: self.graph.induced(vertices),
            side: vertices.iter().map(|&v| self.side[v]).collect(),
        }
    }

    /// Connected components as standalone patterns with inherited sides.
    pub fn components(&self) -> Vec<PatternGraph> {
        self.graph
            .components()
            .iter()
            .map(|c| self.induced(c))
            .collect()
    }

    pub fn disjoint_union(&self, other: &PatternGraph) -> PatternGraph {
        let mut side = self.side.clone();
        side.extend_from_slice(&other.side);
        PatternGraph {
            graph: self.graph.disjoint_union(&other.graph),
            side,
        }
    }

    /// Width: per component, the minimum degree of the bipartite complement taken
    /// across that component's parts; summed over components.
    pub fn width(&self) -> usize {
        self.graph
            .components()
            .iter()
            .map(|comp| {
                if comp.len() == 1 {
                    return 0;
                }
                let first = comp
                    .iter()
                    .filter(|&&v| self.side[v] == Side::First)
                    .count();
                let second = comp.len() - first;
                comp.iter()
                    .map(|&v| {
                        let across = match self.side[v] {
                            Side::First => second,
                            Side::Second => first,
                        };
                        across - self.graph.degree(v)
                    })
                    .min()
                    .unwrap_or(0)
            })
            .sum()
    }

    /// `(r, d)` for one side, or `None` when no vertex there is complete to the other
    /// side or the side has a vertex of degree zero.
    pub fn side_params(&self, side: Side) -> Option<CompleteSide> {
        let own = self.part(side);
        let across = self.n() - own.len();
        if own.is_empty() || across == 0 {
            return None;
        }
        let degrees: Vec<usize> = own.iter().map(|&v| self.graph.degree(v)).collect();
        let r = degrees.iter().filter(|&&d| d == across).count();
        let d = degrees.iter().copied().min().unwrap_or(0);
        (r >= 1 && d >= 1).then_some(CompleteSide { side, r, d })
    }

    /// Best side for the complete-side bound: larger `r·d`, then larger `r`, then the
    /// first part.
    pub fn complete_side_params(&self) -> Option<CompleteSide> {
        let a = self.side_params(Side::First);
        let b = self.side_params(Side::Second);
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => {
                let ka = (a.r * a.d, a.r);
                let kb = (b.r * b.d, b.r);
                Some(if kb > ka { b } else { a })
            }
        }
    }

    /// Deletes every degree-1 vertex in a single pass (no iteration), returning the
    /// remaining induced pattern and the number `s` of deleted vertices.
    pub fn strip_leaves(&self) -> (PatternGraph, usize) {
        let keep: Vec<usize> = (0..self.n())
            .filter(|&v| self.graph.degree(v) != 1)
            .collect();
        let s = self.n() - keep.len();
        (self.induced(&keep), s)
    }

    /// Adds the edge `(u, v)`; it must cross the bipartition.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<PatternGraph> {
        if u >= self.n() || v >= self.n() {
            return Err(Error::VertexOutOfRange { u, v, n: self.n() });
        }
        if self.side[u] == self.side[v] {
            return Err(Error::InvalidPartition(format!(
                "edge ({u}, {v}) would lie inside one part"
            )));
        }
        let mut graph = self.graph.clone();
        graph.set_edge(u, v, true);
        Ok(PatternGraph {
            graph,
            side: self.side.clone(),
        })
    }
}

impl AsRef<Graph> for PatternGraph {
    fn as_ref(&self) -> &Graph {
        &self.graph
    }
}

impl fmt::Debug for PatternGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Pattern(parts {:?} | {:?}, edges={:?})",
            self.part1(),
            self.part2(),
            self.edges()
        )
    }
}

/// Odd cycle closed by the non-tree edge `u-v` between two same-coloured vertices.
fn odd_cycle(parent: &[usize], depth: &[usize], u: usize, v: usize) -> Vec<usize> {
    let (mut a, mut b) = (u, v);
    let mut left = vec![a];
    let mut right = vec![b];
    while depth[a] > depth[b] {
        a = parent[a];
        left.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        right.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        left.push(a);
        right.push(b);
    }
    right.pop();
    // left: u .. lca, right: v .. (child of lca); read lca -> u, then v -> lca
    let mut cycle: Vec<usize> = left.into_iter().rev().collect();
    cycle.extend(right);
    cycle
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> PatternGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        PatternGraph::from_edges(n, &edges, None).unwrap()
    }

    fn biclique(a: usize, b: usize) -> PatternGraph {
        let mut edges = Vec::new();
        for i in 0..a {
            for j in 0..b {
                edges.push((i, a + j));
            }
        }
        PatternGraph::from_edges(a + b, &edges, None).unwrap()
    }

    #[test]
    fn c4_two_colouring() {
        let c4 = cycle(4);
        assert_eq!(c4.part1(), vec![0, 2]);
        assert_eq!(c4.part2(), vec![1, 3]);
    }

    #[test]
    fn triangle_names_its_cycle() {
        let err = PatternGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)], None).unwrap_err();
        assert_eq!(
            err,
            Error::NotBipartite {
                cycle: vec![0, 1, 2]
            }
        );
        assert_eq!(err.to_string(), "graph is not bipartite: odd cycle 0-1-2");
    }

    #[test]
    fn odd_cycle_is_a_real_cycle() {
        let err = PatternGraph::from_edges(
            7,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 0)],
            None,
        )
        .unwrap_err();
        let Error::NotBipartite { cycle } = err else {
            panic!()
        };
        assert_eq!(cycle.len() % 2, 1);
        let g = cycle_graph_edges(7);
        for i in 0..cycle.len() {
            let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            assert!(g.contains(&(a.min(b), a.max(b))), "{a}-{b} missing");
        }
    }

    fn cycle_graph_edges(n: usize) -> Vec<(usize, usize)> {
        (0..n)
            .map(|i| (i.min((i + 1) % n), i.max((i + 1) % n)))
            .collect()
    }

    #[test]
    fn declared_partition_is_validated() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(PatternGraph::with_parts(g.clone(), &[0, 1], &[]).is_err());
        assert!(PatternGraph::with_parts(g.clone(), &[0], &[]).is_err());
        assert!(PatternGraph::with_parts(g.clone(), &[0], &[0, 1]).is_err());
        assert!(PatternGraph::with_parts(g, &[1], &[0]).is_ok());
    }

    #[test]
    fn width_examples() {
        assert_eq!(biclique(2, 3).width(), 0);
        assert_eq!(biclique(1, 4).width(), 0);
        assert_eq!(cycle(6).width(), 1);
        assert_eq!(cycle(6).disjoint_union(&cycle(6)).width(), 2);
        let isolated = PatternGraph::from_edges(3, &[], None).unwrap();
        assert_eq!(isolated.width(), 0);
    }

    #[test]
    fn complete_side_examples() {
        let c4 = cycle(4);
        assert_eq!(
            c4.complete_side_params(),
            Some(CompleteSide {
                side: Side::First,
                r: 2,
                d: 2
            })
        );
        assert_eq!(
            c4.side_params(Side::Second).map(|p| (p.r, p.d)),
            Some((2, 2))
        );

        // K_{1,3} with the centre in the first part
        let star = biclique(1, 3);
        assert_eq!(star.part1(), vec![0]);
        assert_eq!(
            star.side_params(Side::First).map(|p| (p.r, p.d)),
            Some((1, 3))
        );
        assert_eq!(
            star.side_params(Side::Second).map(|p| (p.r, p.d)),
            Some((3, 1))
        );
        // tie on r·d = 3 is broken by the larger r
        assert_eq!(
            star.complete_side_params().map(|p| p.side),
            Some(Side::Second)
        );

        let q3 = PatternGraph::from_edges(
            8,
            &(0..8usize)
                .flat_map(|v| (0..3).map(move |b| (v, v ^ (1 << b))))
                .filter(|&(u, v)| u < v)
                .collect::<Vec<_>>(),
            None,
        )
        .unwrap();
        assert_eq!(q3.m(), 12);
        assert_eq!(q3.complete_side_params(), None);
    }

    #[test]
    fn strip_leaves_examples() {
        let pendant =
            PatternGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)], None).unwrap();
        let (core, s) = pendant.strip_leaves();
        assert_eq!(s, 1);
        assert_eq!(core.graph(), cycle(4).graph());

        let (core, s) = cycle(4).strip_leaves();
        assert_eq!((core.n(), s), (4, 0));

        let (core, s) = biclique(1, 3).strip_leaves();
        assert_eq!((core.n(), core.m(), s), (1, 0, 3));
    }
}
