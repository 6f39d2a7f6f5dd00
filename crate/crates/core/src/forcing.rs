//! Quasirandomness battery and forcing experiments.
//!
//! All statistics are exact rationals; tolerances are explicit and recorded in
//! every report. A finite family can refute forcing at a tolerance, never prove it.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::bitset::{popcount_and, VertexSet};
use crate::error::{Error, Result};
use crate::exact::{ratio_int, ratio_of, ratio_pow, serialize_big, ExactValue};
use crate::generators::{generate, GenSpec};
use crate::graph::Graph;
use crate::homcount::{cycle_count, path_count, Counter};
use crate::pattern::PatternGraph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tolerances {
    pub edge: ExactValue,
    pub c4: ExactValue,
    pub codeg: ExactValue,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            edge: ExactValue(ratio_of(1, 20)),
            c4: ExactValue(ratio_of(1, 20)),
            codeg: ExactValue(ratio_of(1, 20)),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Passes {
    pub edge: bool,
    pub c4: bool,
    pub codeg: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiReport {
    pub n: usize,
    pub p_ref: ExactValue,
    /// `p_ref` was taken as `t_K2(G)`.
    pub p_auto: bool,
    pub t_k2: ExactValue,
    pub t_c4: ExactValue,
    pub dev_edge: ExactValue,
    pub dev_c4: ExactValue,
    /// `Σ_{u,v} |codeg(u,v) - p²N| / (N² · p²N)` over all ordered pairs.
    pub dev_codeg: ExactValue,
    pub tolerances: Tolerances,
    pub pass: Passes,
    /// Edge and C4 deviations both within tolerance.
    pub quasirandom: bool,
}

fn rel_dev(x: &BigRational, target: &BigRational) -> BigRational {
    (x - target).abs() / target
}

pub fn quasirandom_battery(
    g: &Graph,
    p: Option<&BigRational>,
    tol: &Tolerances,
) -> Result<QuasiReport> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "the battery needs at least 2 vertices".into(),
        ));
    }
    let nn = BigInt::from(n);
    let t_k2 = BigRational::new(BigInt::from(2 * g.edge_count()), &nn * &nn);
    let p_ref = p.cloned().unwrap_or_else(|| t_k2.clone());
    if p_ref <= BigRational::zero() {
        return Err(Error::InvalidParameter(
            "reference density p must be positive".into(),
        ));
    }
    let t_c4 = BigRational::new(BigInt::from(cycle_count(g, 4)), nn.pow(4));
    let dev_edge = rel_dev(&t_k2, &p_ref);
    let dev_c4 = rel_dev(&t_c4, &ratio_pow(&p_ref, 4));
    let dev_codeg = codegree_deviation(g, &p_ref);
    let pass = Passes {
        edge: dev_edge <= tol.edge.0,
        c4: dev_c4 <= tol.c4.0,
        codeg: dev_codeg <= tol.codeg.0,
    };
    Ok(QuasiReport {
        n,
        p_auto: p.is_none(),
        p_ref: ExactValue(p_ref),
        t_k2: ExactValue(t_k2),
        t_c4: ExactValue(t_c4),
        dev_edge: ExactValue(dev_edge),
        dev_c4: ExactValue(dev_c4),
        dev_codeg: ExactValue(dev_codeg),
        tolerances: tol.clone(),
        quasirandom: pass.edge && pass.c4,
        pass,
    })
}

/// With `p = a/b`: `Σ |codeg·b² - a²N| / (N³ a²)`.
fn codegree_deviation(g: &Graph, p: &BigRational) -> BigRational {
    let n = g.n();
    let a = p.numer().clone();
    let b = p.denom().clone();
    let scale = &b * &b;
    let target = &a * &a * BigInt::from(n);
    let fast = (scale.to_i128(), target.to_i128());
    let total: BigInt = match fast {
        (Some(s), Some(t)) if s < 1 << 60 && t < 1 << 60 && n < 1 << 20 => {
            let mut sum: i128 = 0;
            for u in 0..n {
                sum += (g.degree(u) as i128 * s - t).abs();
                for v in u + 1..n {
                    let c = popcount_and(g.row(u), g.row(v)) as i128;
                    sum += 2 * (c * s - t).abs();
                }
            }
            BigInt::from(sum)
        }
        _ => {
            let mut sum = BigInt::zero();
            for u in 0..n {
                for v in 0..n {
                    let c = if u == v {
                        g.degree(u)
                    } else {
                        g.codegree(u, v)
                    };
                    sum += (BigInt::from(c) * &scale - &target).abs();
                }
            }
            sum
        }
    };
    BigRational::new(total, BigInt::from(n).pow(3) * &a * &a)
}

#[derive(Clone, Debug, Serialize)]
pub struct Member {
    pub spec: GenSpec,
    pub n: usize,
    pub t_h: ExactValue,
    /// `t_K2^m`.
    pub p_power: ExactValue,
    pub dev_h: ExactValue,
    /// Edge and pattern densities both within tolerance.
    pub premise: bool,
    pub battery: QuasiReport,
    pub conclusion: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ForcingVerdict {
    /// Some member meets the premise and fails the battery.
    CounterexampleAtScale,
    /// Every member meeting the premise passes the battery.
    ConsistentWithForcing,
    /// No member meets the premise.
    PremiseNeverMet,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub m: usize,
    /// Reference density: fixed, or each member's `t_K2` when absent.
    pub p: Option<ExactValue>,
    pub members: Vec<Member>,
    pub verdict: ForcingVerdict,
}

/// The pattern deviation uses the C4 tolerance.
pub fn forcing_experiment(
    h: &PatternGraph,
    family: &[GenSpec],
    p: Option<&BigRational>,
    tol: &Tolerances,
) -> Result<ExperimentReport> {
    if family.is_empty() {
        return Err(Error::InvalidParameter(
            "forcing experiment needs a nonempty family".into(),
        ));
    }
    let m = h.m();
    let mut members = Vec::new();
    for spec in family {
        let g = generate(spec)?;
        let battery = quasirandom_battery(&g, p, tol)?;
        let t_h = Counter::default().density(h.graph(), &g)?.to_ratio();
        let p_power = ratio_pow(&battery.p_ref.0, m as u32);
        let dev_h = rel_dev(&t_h, &p_power);
        let premise = battery.pass.edge && dev_h <= tol.c4.0;
        members.push(Member {
            spec: spec.clone(),
            n: g.n(),
            t_h: ExactValue(t_h),
            p_power: ExactValue(p_power),
            dev_h: ExactValue(dev_h),
            premise,
            conclusion: battery.quasirandom,
            battery,
        });
    }
    let verdict = if members.iter().any(|x| x.premise && !x.conclusion) {
        ForcingVerdict::CounterexampleAtScale
    } else if members.iter().any(|x| x.premise) {
        ForcingVerdict::ConsistentWithForcing
    } else {
        ForcingVerdict::PremiseNeverMet
    };
    Ok(ExperimentReport {
        m,
        p: p.cloned().map(ExactValue),
        members,
        verdict,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeDeviation {
    pub n: usize,
    pub p: ExactValue,
    pub epsilon: ExactValue,
    /// `Σ_v (deg v - pN)`.
    pub sum_delta: ExactValue,
    pub sum_delta_sq: ExactValue,
    /// `h_{K_{1,2}}(G)` from the walk count.
    #[serde(serialize_with = "serialize_big")]
    pub h_k12: BigUint,
    /// `p²N³ + 2pN Σδ + Σδ²`.
    pub expansion: ExactValue,
    pub identity_holds: bool,
    /// `#{v : deg v < (1 - ε) pN}`.
    pub deviant_count: usize,
    /// `t_{K_{1,2}} - p²`.
    pub excess: ExactValue,
    /// `ε³ p²`.
    pub claim_scale: ExactValue,
    pub excess_below_scale: bool,
}

pub fn degree_concentration(
    g: &Graph,
    p: &BigRational,
    eps: &BigRational,
) -> Result<DegreeDeviation> {
    if *eps <= BigRational::zero() || *eps >= BigRational::one() {
        return Err(Error::InvalidParameter("epsilon must lie in (0, 1)".into()));
    }
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let n = g.n();
    let big_n = ratio_int(n);
    let pn = p * &big_n;
    let mut sum_delta = BigRational::zero();
    let mut sum_delta_sq = BigRational::zero();
    let cutoff = (BigRational::one() - eps) * &pn;
    let mut deviant = 0;
    for v in 0..n {
        let deg = ratio_int(g.degree(v));
        let delta = &deg - &pn;
        sum_delta += &delta;
        sum_delta_sq += &delta * &delta;
        if deg < cutoff {
            deviant += 1;
        }
    }
    let h_k12 = path_count(g, 2);
    let expansion = p * p * ratio_pow(&big_n, 3) + ratio_int(2) * &pn * &sum_delta + &sum_delta_sq;
    let h_ratio = BigRational::from_integer(BigInt::from(h_k12.clone()));
    let excess = &h_ratio / ratio_pow(&big_n, 3) - p * p;
    let claim_scale = ratio_pow(eps, 3) * p * p;
    Ok(DegreeDeviation {
        n,
        p: ExactValue(p.clone()),
        epsilon: ExactValue(eps.clone()),
        identity_holds: expansion == h_ratio,
        sum_delta: ExactValue(sum_delta),
        sum_delta_sq: ExactValue(sum_delta_sq),
        h_k12,
        expansion: ExactValue(expansion),
        deviant_count: deviant,
        excess_below_scale: excess < claim_scale,
        excess: ExactValue(excess),
        claim_scale: ExactValue(claim_scale),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LeafExtension {
    /// Deleted degree-1 vertices.
    pub s: usize,
    pub core_vertices: usize,
    #[serde(serialize_with = "serialize_big")]
    pub h_h: BigUint,
    /// `Σ_φ Π_leaves deg(φ(neighbour))` over core homomorphisms, times `2M` for each
    /// single-edge component.
    #[serde(serialize_with = "serialize_big")]
    pub extension_sum: BigUint,
    pub identity_holds: bool,
    pub min_degree: usize,
    #[serde(serialize_with = "serialize_big")]
    pub h_core: BigUint,
    /// `δ(G)^s · h_{core}(G)`.
    #[serde(serialize_with = "serialize_big")]
    pub min_degree_bound: BigUint,
    pub bound_holds: bool,
}

/// Largest core the extension sum will enumerate.
pub const MAX_EXTENSION_CORE: usize = 10;

pub fn leaf_extension(h: &PatternGraph, g: &Graph) -> Result<LeafExtension> {
    let hg = h.graph();
    let (core, s) = h.strip_leaves();
    let kept: Vec<usize> = (0..hg.n()).filter(|&v| hg.degree(v) != 1).collect();
    if kept.len() > MAX_EXTENSION_CORE {
        return Err(Error::InvalidParameter(format!(
            "core has {} vertices, above {MAX_EXTENSION_CORE}",
            kept.len()
        )));
    }
    // leaves hanging on each core vertex; leaf pairs form single-edge components
    let mut hang = vec![0u32; kept.len()];
    let mut matched_edges = 0u32;
    for v in (0..hg.n()).filter(|&v| hg.degree(v) == 1) {
        let u = hg.neighbors(v).next().expect("degree one");
        match kept.binary_search(&u) {
            Ok(i) => hang[i] += 1,
            Err(_) => matched_edges += 1,
        }
    }
    let single_edges = matched_edges / 2;
    let weighted = weighted_core_count(core.graph(), g, &hang);
    let two_m = BigUint::from(2 * g.edge_count());
    let extension_sum = weighted * two_m.pow(single_edges);
    let counter = Counter::default();
    let h_h = counter.count(hg, g)?.count;
    let h_core = counter.count(core.graph(), g)?.count;
    let min_degree = if g.n() == 0 { 0 } else { g.min_degree() };
    let min_degree_bound = BigUint::from(min_degree).pow(s as u32) * &h_core;
    Ok(LeafExtension {
        s,
        core_vertices: kept.len(),
        identity_holds: h_h == extension_sum,
        bound_holds: h_h >= min_degree_bound,
        h_h,
        extension_sum,
        min_degree,
        h_core,
        min_degree_bound,
    })
}

/// `Σ_φ Π_x deg(φ(x))^{w_x}` over homomorphisms `φ: core -> g`, by backtracking.
fn weighted_core_count(core: &Graph, g: &Graph, w: &[u32]) -> BigUint {
    fn go(
        core: &Graph,
        g: &Graph,
        w: &[u32],
        f: &mut Vec<usize>,
        acc: &BigUint,
        total: &mut BigUint,
    ) {
        let v = f.len();
        if v == core.n() {
            *total += acc;
            return;
        }
        let mut cand = VertexSet::full(g.n());
        for u in core.neighbors(v).filter(|&u| u < v) {
            cand.and_row(g.row(f[u]));
        }
        for x in cand.iter() {
            f.push(x);
            let next = acc * BigUint::from(g.degree(x)).pow(w[v]);
            go(core, g, w, f, &next, total);
            f.pop();
        }
    }
    let mut total = BigUint::zero();
    go(core, g, w, &mut Vec::new(), &BigUint::one(), &mut total);
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{pattern_shorthand, Family};

    fn two_cliques(n: usize) -> Graph {
        generate(&GenSpec::new(Family::TwoCliques { n }, 0)).unwrap()
    }

    #[test]
    fn complete_graph_c4_deviation() {
        let g = Graph::complete(50);
        let rep = quasirandom_battery(&g, None, &Tolerances::default()).unwrap();
        let expected = ratio_of(49u64.pow(4) + 49, 50u64.pow(4));
        assert_eq!(rep.t_c4.0, expected);
        assert!(rep.dev_c4.0 < ratio_of(1, 100));
        assert!(rep.pass.edge && rep.pass.c4);
    }

    #[test]
    fn two_cliques_fail() {
        let rep = quasirandom_battery(&two_cliques(200), None, &Tolerances::default()).unwrap();
        let d = rep.dev_c4.0.to_f64().unwrap();
        assert!((d - 1.0).abs() < 0.1, "{d}");
        assert!(!rep.quasirandom);
    }

    #[test]
    fn codegree_statistic_matches_direct_sum() {
        let g = generate(&GenSpec::gnp(40, "1/3".parse().unwrap(), 2)).unwrap();
        let p = ratio_of(1, 3);
        let rep = quasirandom_battery(&g, Some(&p), &Tolerances::default()).unwrap();
        let n = g.n();
        let mut s = BigRational::zero();
        for u in 0..n {
            for v in 0..n {
                let c = g.common_neighborhood(&[u, v]).unwrap().len();
                s += (ratio_int(c) - &p * &p * ratio_int(n)).abs();
            }
        }
        assert_eq!(
            rep.dev_codeg.0,
            s / (ratio_int(n * n) * &p * &p * ratio_int(n))
        );
        assert!(
            quasirandom_battery(&g, Some(&BigRational::zero()), &Tolerances::default()).is_err()
        );
    }

    #[test]
    fn forest_obstacle() {
        let fam: Vec<GenSpec> = [100, 200, 400]
            .iter()
            .map(|&n| GenSpec::new(Family::TwoCliques { n }, 0))
            .collect();
        let p2 = pattern_shorthand("P_2").unwrap();
        let rep = forcing_experiment(&p2, &fam, None, &Tolerances::default()).unwrap();
        assert!(rep.members.iter().all(|m| m.premise && !m.conclusion));
        assert_eq!(rep.verdict, ForcingVerdict::CounterexampleAtScale);
        let c4 = pattern_shorthand("C4").unwrap();
        let rep = forcing_experiment(&c4, &fam, None, &Tolerances::default()).unwrap();
        assert_eq!(rep.verdict, ForcingVerdict::PremiseNeverMet);
    }

    #[test]
    fn c4_on_dense_random_graphs() {
        let fam: Vec<GenSpec> = [500, 1000]
            .iter()
            .map(|&n| GenSpec::gnp(n, "1/2".parse().unwrap(), 4))
            .collect();
        let c4 = pattern_shorthand("C4").unwrap();
        let rep = forcing_experiment(&c4, &fam, None, &Tolerances::default()).unwrap();
        assert_eq!(rep.verdict, ForcingVerdict::ConsistentWithForcing);
    }

    #[test]
    fn degree_examples() {
        let rep =
            degree_concentration(&two_cliques(100), &ratio_of(1, 2), &ratio_of(1, 100)).unwrap();
        assert_eq!(rep.deviant_count, 100);
        assert!(rep.identity_holds);
        let rep =
            degree_concentration(&Graph::complete(9), &ratio_of(8, 9), &ratio_of(1, 2)).unwrap();
        assert_eq!(rep.deviant_count, 0);
        assert!(rep.identity_holds);
        assert!(degree_concentration(&Graph::complete(3), &ratio_of(1, 2), &ratio_int(1)).is_err());
    }

    #[test]
    fn leaf_extension_identity() {
        let g = generate(&GenSpec::gnp(9, "1/2".parse().unwrap(), 6)).unwrap();
        let pendant =
            PatternGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)], None).unwrap();
        let k2_plus = pattern_shorthand("C4+K2").unwrap();
        for h in [
            pendant,
            pattern_shorthand("K_{1,3}").unwrap(),
            k2_plus,
            pattern_shorthand("P_4").unwrap(),
        ] {
            let rep = leaf_extension(&h, &g).unwrap();
            assert!(rep.identity_holds && rep.bound_holds, "{h:?}");
        }
    }
}
