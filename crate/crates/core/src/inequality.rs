//! Sidorenko-type bounds, the tensor-power identity and the correlation
//! inequality `t_H >= Π t_{H_i}` with a counterexample search.
//!
//! Fractional exponents never produce roots: `t_H >= t_K^{m/(rd)}` is decided as
//! `t_H^{rd} >= t_K^m` on exact rationals.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::enumerate::{canonical_code, graphs_up_to, MAX_CANONICAL_VERTICES};
use crate::error::{Error, Result};
use crate::exact::{ratio_f64, ratio_of, ratio_pow, ratio_string, ExactValue};
use crate::generators::complete_bipartite;
use crate::graph::Graph;
use crate::homcount::KernelFile;
use crate::homcount::{hom_count_brute, kernel_density, kernel_density_direct, Counter, Kernel};
use crate::io::GraphFile;
use crate::pattern::{PatternGraph, Side};

/// A host: a finite graph or a step kernel.
#[derive(Clone, Copy, Debug)]
pub enum Host<'a> {
    Graph(&'a Graph),
    Kernel(&'a Kernel),
}

impl Host<'_> {
    pub fn density(&self, h: &Graph) -> Result<BigRational> {
        match self {
            Host::Graph(g) => Ok(Counter::default().density(h, g)?.to_ratio()),
            Host::Kernel(w) => Ok(kernel_density(h, w)),
        }
    }

    /// The same density through a second engine (backtracking or direct rationals).
    pub fn density_recheck(&self, h: &Graph) -> Result<BigRational> {
        match self {
            Host::Graph(g) => {
                if g.n() == 0 {
                    return Err(Error::EmptyGraph);
                }
                let c = hom_count_brute(h, g, h.n())?;
                Ok(BigRational::new(
                    BigInt::from(c),
                    BigInt::from(g.n()).pow(h.n() as u32),
                ))
            }
            Host::Kernel(w) => Ok(kernel_density_direct(h, w)),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CompleteSideBound {
    pub side: Side,
    pub r: usize,
    pub d: usize,
    pub t_krd: ExactValue,
    /// `t_H^{rd} / t_{K_{r,d}}^m`, exact.
    pub power_ratio: Option<ExactValue>,
    /// `t_{K_{r,d}}^{m/(rd)}` as a float.
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct WidthBound {
    pub w: usize,
    pub bound: ExactValue,
    pub ratio: Option<ExactValue>,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SidorenkoReport {
    pub m: usize,
    pub t_h: ExactValue,
    pub t_k2: ExactValue,
    pub p_power: ExactValue,
    pub ratio: Option<ExactValue>,
    /// `t_H >= t_{K2}^m`.
    pub conjecture: bool,
    pub theorem13: Option<CompleteSideBound>,
    pub width_bound: WidthBound,
    /// `t_{K2} = 0`: every bound reads `0 >= 0`.
    pub degenerate: bool,
}

fn ratio_or_none(a: &BigRational, b: &BigRational) -> Option<ExactValue> {
    (!b.is_zero()).then(|| ExactValue(a / b))
}

pub fn sidorenko_report(h: &PatternGraph, host: Host) -> Result<SidorenkoReport> {
    let m = h.m();
    let t_h = host.density(h.graph())?;
    let t_k2 = host.density(&Graph::complete(2))?;
    let p_power = ratio_pow(&t_k2, m as u32);
    let theorem13 = match h.complete_side_params() {
        None => None,
        Some(p) => {
            let rd = (p.r * p.d) as u32;
            let t_krd = host.density(&complete_bipartite(p.r, p.d))?;
            let lhs = ratio_pow(&t_h, rd);
            let rhs = ratio_pow(&t_krd, m as u32);
            Some(CompleteSideBound {
                side: p.side,
                r: p.r,
                d: p.d,
                bound: ratio_f64(&t_krd).powf(m as f64 / rd as f64),
                power_ratio: ratio_or_none(&lhs, &rhs),
                holds: lhs >= rhs,
                t_krd: ExactValue(t_krd),
            })
        }
    };
    let w = h.width();
    let wb = ratio_pow(&t_k2, (m + w) as u32);
    Ok(SidorenkoReport {
        m,
        ratio: ratio_or_none(&t_h, &p_power),
        conjecture: t_h >= p_power,
        theorem13,
        width_bound: WidthBound {
            w,
            ratio: ratio_or_none(&t_h, &wb),
            holds: t_h >= wb,
            bound: ExactValue(wb),
        },
        degenerate: t_k2.is_zero(),
        t_h: ExactValue(t_h),
        t_k2: ExactValue(t_k2),
        p_power: ExactValue(p_power),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorReport {
    pub s: u32,
    pub t_base: ExactValue,
    /// `t_H(G)^s`.
    pub analytic: ExactValue,
    /// `t_H(G^s)` from the materialized power, when it fits the budget.
    pub materialized: Option<ExactValue>,
    pub vertices: Option<usize>,
    pub equal: Option<bool>,
    pub notice: Option<String>,
}

pub fn tensor_power_check(
    h: &Graph,
    g: &Graph,
    s: u32,
    vertex_budget: u64,
) -> Result<TensorReport> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let counter = Counter::default();
    let t = counter.density(h, g)?.to_ratio();
    let analytic = ratio_pow(&t, s);
    let (materialized, vertices, notice) = match g.tensor_power(s, vertex_budget) {
        Ok(gs) => (
            Some(counter.density(h, &gs)?.to_ratio()),
            Some(gs.n()),
            None,
        ),
        Err(e @ Error::VertexBudget { .. }) => {
            (None, None, Some(format!("{e}; analytic value only")))
        }
        Err(e) => return Err(e),
    };
    Ok(TensorReport {
        s,
        equal: materialized.as_ref().map(|x| *x == analytic),
        t_base: ExactValue(t),
        analytic: ExactValue(analytic),
        materialized: materialized.map(ExactValue),
        vertices,
        notice,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialCase {
    /// Every part is a single edge: the inequality is `t_H >= t_{K2}^m`.
    SidorenkoCase,
    /// One part is a cycle and the others single edges.
    ForcingReduction,
}

/// Edge-disjoint parts covering `E(H)`, each kept on the vertices it touches.
#[derive(Clone, Debug)]
pub struct EdgePartition {
    pub parts: Vec<Graph>,
    pub edges: Vec<Vec<(usize, usize)>>,
    pub case: Option<SpecialCase>,
}

impl EdgePartition {
    pub fn new(h: &Graph, parts: &[Vec<(usize, usize)>]) -> Result<Self> {
        let norm = |(u, v): (usize, usize)| (u.min(v), u.max(v));
        let all: BTreeSet<(usize, usize)> = h.edges().into_iter().collect();
        let mut seen = BTreeSet::new();
        let mut defects = Vec::new();
        for (i, part) in parts.iter().enumerate() {
            if part.is_empty() {
                defects.push(format!("part {i} is empty"));
            }
            for &e in part {
                let e = norm(e);
                if !all.contains(&e) {
                    defects.push(format!(
                        "part {i} has ({}, {}), not an edge of the pattern",
                        e.0, e.1
                    ));
                } else if !seen.insert(e) {
                    defects.push(format!(
                        "edge ({}, {}) appears in more than one part",
                        e.0, e.1
                    ));
                }
            }
        }
        for e in all.difference(&seen) {
            defects.push(format!("edge ({}, {}) is in no part", e.0, e.1));
        }
        if !defects.is_empty() {
            return Err(Error::InvalidEdgePartition(defects.join("; ")));
        }
        let graphs: Vec<Graph> = parts.iter().map(|p| edge_subgraph(p)).collect();
        let single = |g: &Graph| g.edge_count() == 1;
        let is_cycle =
            |g: &Graph| g.is_connected() && g.n() >= 3 && g.degrees().iter().all(|&d| d == 2);
        let case = if graphs.iter().all(single) {
            Some(SpecialCase::SidorenkoCase)
        } else if graphs.iter().filter(|g| is_cycle(g)).count() == 1
            && graphs.iter().all(|g| single(g) || is_cycle(g))
        {
            Some(SpecialCase::ForcingReduction)
        } else {
            None
        };
        Ok(EdgePartition {
            parts: graphs,
            edges: parts
                .iter()
                .map(|p| p.iter().map(|&e| norm(e)).collect())
                .collect(),
            case,
        })
    }
}

/// The graph formed by `edges` on the vertices they touch, relabelled in order.
fn edge_subgraph(edges: &[(usize, usize)]) -> Graph {
    let verts: Vec<usize> = edges
        .iter()
        .flat_map(|&(u, v)| [u, v])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let id = |x: usize| verts.binary_search(&x).unwrap();
    let local: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (id(u), id(v))).collect();
    Graph::from_edges(verts.len(), &local).expect("valid edges")
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrelationReport {
    pub t_h: ExactValue,
    pub parts: Vec<ExactValue>,
    pub product: ExactValue,
    /// `t_H / Π t_{H_i}`; `None` when the product is 0.
    pub ratio: Option<ExactValue>,
    pub holds: bool,
    pub case: Option<SpecialCase>,
}

pub fn correlation_check(
    h: &Graph,
    partition: &EdgePartition,
    host: Host,
) -> Result<CorrelationReport> {
    let t_h = host.density(h)?;
    let parts = partition
        .parts
        .iter()
        .map(|p| host.density(p))
        .collect::<Result<Vec<_>>>()?;
    let product: BigRational = parts.iter().cloned().product();
    Ok(CorrelationReport {
        ratio: ratio_or_none(&t_h, &product),
        holds: t_h >= product,
        case: partition.case,
        t_h: ExactValue(t_h),
        product: ExactValue(product),
        parts: parts.into_iter().map(ExactValue).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "space", rename_all = "snake_case")]
pub enum SearchSpace {
    /// Every graph on `1..=max_n` vertices, one per isomorphism class.
    AllGraphs { max_n: usize },
    /// `q` blocks, weights in `{0, 1/L, ..., 1}`, block masses in `{0, 1/M, ..., 1}`.
    KernelGrid {
        q: usize,
        weight_levels: u32,
        measure_levels: u32,
    },
    /// Constant kernels `p = i / levels`, `i = 1..=levels`.
    Constant { levels: u32 },
    /// Seeded hill climbing over `q`-block kernels on the grid with the given levels.
    LocalSearch {
        q: usize,
        levels: u32,
        iters: usize,
        seed: u64,
    },
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instance {
    Graph(GraphFile),
    Kernel(KernelFile),
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchBest {
    /// Canonical instance encoding, also the tie-break key.
    pub encoding: String,
    pub instance: Instance,
    pub ratio: ExactValue,
    pub t_h: ExactValue,
    pub product: ExactValue,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub space: SearchSpace,
    pub budget: u64,
    pub scanned: u64,
    /// Instances skipped because `Π t_{H_i} = 0`.
    pub degenerate: u64,
    /// Every instance of the space was visited.
    pub exhausted: bool,
    pub best: Option<SearchBest>,
    /// Best ratio below 1, confirmed by the second engine.
    pub counterexample: bool,
    /// The best record re-evaluated by a second engine and found identical.
    pub rechecked: bool,
}

/// Minimum-ratio scan; ties go to the lexicographically smaller encoding.
pub fn correlation_search(
    h: &Graph,
    partition: &EdgePartition,
    space: &SearchSpace,
    budget: u64,
) -> Result<SearchReport> {
    let mut state = Search {
        h,
        partition,
        budget,
        scanned: 0,
        degenerate: 0,
        best: None,
    };
    let exhausted = match space {
        SearchSpace::AllGraphs { max_n } => {
            if *max_n == 0
                || *max_n > MAX_CANONICAL_VERTICES.min(crate::enumerate::MAX_ENUMERATED_VERTICES)
            {
                return Err(Error::InvalidParameter(format!(
                    "graph space needs 1 <= max_n <= {}",
                    crate::enumerate::MAX_ENUMERATED_VERTICES
                )));
            }
            let mut done = true;
            for g in graphs_up_to(*max_n) {
                let enc = format!("graph n={} code={:016x}", g.n(), canonical_code(&g));
                if !state.visit(Host::Graph(&g), enc, || {
                    Instance::Graph(GraphFile::from_graph(&g))
                })? {
                    done = false;
                    break;
                }
            }
            done
        }
        SearchSpace::Constant { levels } => {
            if *levels == 0 {
                return Err(Error::InvalidParameter(
                    "constant space needs levels >= 1".into(),
                ));
            }
            let mut done = true;
            for i in 1..=*levels {
                let k = Kernel::constant(ratio_of(i, *levels))?;
                if !state.visit_kernel(&k)? {
                    done = false;
                    break;
                }
            }
            done
        }
        SearchSpace::KernelGrid {
            q,
            weight_levels,
            measure_levels,
        } => {
            if *q == 0 || *weight_levels == 0 || *measure_levels == 0 {
                return Err(Error::InvalidParameter(
                    "kernel grid needs q, L, M >= 1".into(),
                ));
            }
            let mut done = true;
            'outer: for mu in compositions(*measure_levels, *q) {
                let measure: Vec<BigRational> =
                    mu.iter().map(|&x| ratio_of(x, *measure_levels)).collect();
                let slots = q * (q + 1) / 2;
                let total = (*weight_levels as u64 + 1).pow(slots as u32);
                for code in 0..total {
                    let mut rest = code;
                    let mut weights = vec![vec![BigRational::zero(); *q]; *q];
                    for i in 0..*q {
                        for j in i..*q {
                            let x = rest % (*weight_levels as u64 + 1);
                            rest /= *weight_levels as u64 + 1;
                            let w = ratio_of(x, *weight_levels);
                            weights[i][j] = w.clone();
                            weights[j][i] = w;
                        }
                    }
                    let k = Kernel::new(weights, measure.clone())?;
                    if !state.visit_kernel(&k)? {
                        done = false;
                        break 'outer;
                    }
                }
            }
            done
        }
        SearchSpace::LocalSearch {
            q,
            levels,
            iters,
            seed,
        } => {
            if *q == 0 || *levels == 0 {
                return Err(Error::InvalidParameter(
                    "local search needs q, levels >= 1".into(),
                ));
            }
            local_search(&mut state, *q, *levels, *iters, *seed)?;
            false
        }
    };
    let mut rechecked = false;
    let mut counterexample = false;
    if let Some(best) = &state.best {
        let (t_h, product) = match &best.instance {
            Instance::Graph(f) => {
                let g = f.graph()?;
                recheck(h, partition, Host::Graph(&g))?
            }
            Instance::Kernel(f) => {
                let k = f.clone().into_kernel()?;
                recheck(h, partition, Host::Kernel(&k))?
            }
        };
        rechecked = t_h == best.t_h.0 && product == best.product.0;
        counterexample = rechecked && best.ratio.0 < BigRational::one();
    }
    Ok(SearchReport {
        space: space.clone(),
        budget,
        scanned: state.scanned,
        degenerate: state.degenerate,
        exhausted,
        best: state.best,
        counterexample,
        rechecked,
    })
}

fn recheck(h: &Graph, partition: &EdgePartition, host: Host) -> Result<(BigRational, BigRational)> {
    let t_h = host.density_recheck(h)?;
    let mut product = BigRational::one();
    for p in &partition.parts {
        product *= host.density_recheck(p)?;
    }
    Ok((t_h, product))
}

struct Search<'a> {
    h: &'a Graph,
    partition: &'a EdgePartition,
    budget: u64,
    scanned: u64,
    degenerate: u64,
    best: Option<SearchBest>,
}

impl Search<'_> {
    /// Evaluates one instance; `false` once the budget is spent.
    fn visit(
        &mut self,
        host: Host,
        encoding: String,
        instance: impl FnOnce() -> Instance,
    ) -> Result<bool> {
        if self.scanned >= self.budget {
            return Ok(false);
        }
        self.scanned += 1;
        let ratio = self.ratio(host)?;
        let Some((ratio, t_h, product)) = ratio else {
            self.degenerate += 1;
            return Ok(true);
        };
        let better = match &self.best {
            None => true,
            Some(b) => (&ratio, &encoding) < (&b.ratio.0, &b.encoding),
        };
        if better {
            self.best = Some(SearchBest {
                encoding,
                instance: instance(),
                ratio: ExactValue(ratio),
                t_h: ExactValue(t_h),
                product: ExactValue(product),
            });
        }
        Ok(true)
    }

    fn visit_kernel(&mut self, k: &Kernel) -> Result<bool> {
        let enc = kernel_encoding(k);
        self.visit(Host::Kernel(k), enc, || {
            Instance::Kernel(KernelFile::from_kernel(k))
        })
    }

    fn ratio(&self, host: Host) -> Result<Option<(BigRational, BigRational, BigRational)>> {
        let mut product = BigRational::one();
        for p in &self.partition.parts {
            product *= host.density(p)?;
            if product.is_zero() {
                return Ok(None);
            }
        }
        let t_h = host.density(self.h)?;
        Ok(Some((&t_h / &product, t_h, product)))
    }
}

fn kernel_encoding(k: &Kernel) -> String {
    let q = k.size();
    let mut parts = vec![format!("kernel q={q}")];
    parts.push(format!(
        "mu={}",
        k.measure()
            .iter()
            .map(ratio_string)
            .collect::<Vec<_>>()
            .join(",")
    ));
    let mut w = Vec::new();
    for i in 0..q {
        for j in i..q {
            w.push(ratio_string(k.weight(i, j)));
        }
    }
    parts.push(format!("w={}", w.join(",")));
    parts.join(" ")
}

/// Ordered ways to write `total` as `parts` nonnegative summands.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn local_search(state: &mut Search, q: usize, levels: u32, iters: usize, seed: u64) -> Result<()> {
    let mut rng = crate::generators::rng(seed);
    let build = |w: &[Vec<u32>], mu: &[u32]| -> Result<Kernel> {
        let weights = w
            .iter()
            .map(|row| row.iter().map(|&x| ratio_of(x, levels)).collect())
            .collect();
        let measure = mu.iter().map(|&x| ratio_of(x, levels)).collect();
        Kernel::new(weights, measure)
    };
    let mut w = vec![vec![0u32; q]; q];
    for i in 0..q {
        for j in i..q {
            let x = rng.gen_range(0..=levels);
            w[i][j] = x;
            w[j][i] = x;
        }
    }
    let mut mu = vec![0u32; q];
    for _ in 0..levels {
        mu[rng.gen_range(0..q)] += 1;
    }
    let mut current = {
        let k = build(&w, &mu)?;
        if !state.visit_kernel(&k)? {
            return Ok(());
        }
        state.ratio(Host::Kernel(&k))?.map(|r| r.0)
    };
    for _ in 0..iters {
        let (mut w2, mut mu2) = (w.clone(), mu.clone());
        if q > 1 && rng.gen_bool(0.3) {
            let (a, b) = (rng.gen_range(0..q), rng.gen_range(0..q));
            if mu2[a] == 0 || a == b {
                continue;
            }
            mu2[a] -= 1;
            mu2[b] += 1;
        } else {
            let (i, j) = (rng.gen_range(0..q), rng.gen_range(0..q));
            let x = if rng.gen_bool(0.5) {
                w2[i][j].saturating_sub(1)
            } else {
                (w2[i][j] + 1).min(levels)
            };
            w2[i][j] = x;
            w2[j][i] = x;
        }
        let k = build(&w2, &mu2)?;
        if !state.visit_kernel(&k)? {
            return Ok(());
        }
        let r = state.ratio(Host::Kernel(&k))?.map(|r| r.0);
        let accept = match (&r, &current) {
            (Some(a), Some(b)) => a <= b,
            (Some(_), None) => true,
            _ => false,
        };
        if accept {
            w = w2;
            mu = mu2;
            current = r;
        }
    }
    Ok(())
}
