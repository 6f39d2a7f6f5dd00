//! Dependent random choice at desk scale.
//!
//! [`drc_classify`] sorts vertex sequences into rare / bad / good exactly as the
//! rarity definition prescribes, [`hyper_embed_count`] counts embeddings of a small
//! hypergraph into a sequence hypergraph, and [`constructive_bound`] runs the
//! embedding pipeline that turns good sequences into a certified lower bound on
//! `h_H(G)`.
//!
//! Every rarity test `|N(S)| <= c t^{k/(rd)} N` is decided on integers after
//! raising both sides to the power `rd`, so no root is ever taken.
//!
//! Everything about a sequence here depends only on its support set, so the
//! exhaustive mode enumerates sets and weights each by the number of sequences
//! with that support (surjection counts).

mod constructive;
mod hyper;

pub use constructive::{
    constructive_bound, constructive_bound_from, constructive_bound_with, ConstructiveReport,
};
pub use hyper::{
    hyper_embed_count, EmbedReport, ExplicitSeqHypergraph, Hypergraph, KHypothesis,
    SequenceHypergraph, ThresholdSeqHypergraph,
};

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::bitset::{words_for, Ones, VertexSet};
use crate::error::{Error, Result};
use crate::exact::{ratio_parts, ratio_string, serialize_big, surjections, ExactValue};
use crate::graph::Graph;
use crate::homcount::{biclique_count, biclique_count_sequences};

/// Default cap on the number of support sets visited in exhaustive mode.
pub const DEFAULT_ENUM_BUDGET: u128 = 100_000_000;

/// Support-class lists longer than this are summarized by tallies only.
pub const MAX_LISTED_CLASSES: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrcParams {
    pub r: usize,
    pub d: usize,
    pub n: usize,
    pub c: BigRational,
}

impl DrcParams {
    /// `c` defaults to `(2n)^{-2n}`.
    pub fn new(r: usize, d: usize, n: usize, c: Option<BigRational>) -> Result<Self> {
        if r == 0 || d == 0 || n == 0 {
            return Err(Error::InvalidParameter(
                "r, d and n must be positive".into(),
            ));
        }
        if d > n {
            return Err(Error::InvalidParameter(format!("d = {d} exceeds n = {n}")));
        }
        let c = c.unwrap_or_else(|| default_constant(n));
        if c <= BigRational::zero() || c > BigRational::one() {
            return Err(Error::InvalidParameter(format!(
                "c = {} is outside (0, 1]",
                ratio_string(&c)
            )));
        }
        Ok(DrcParams { r, d, n, c })
    }

    pub fn with_c(&self, c: BigRational) -> Result<Self> {
        DrcParams::new(self.r, self.d, self.n, Some(c))
    }

    pub fn k_range(&self) -> std::ops::RangeInclusive<usize> {
        self.d..=self.n
    }
}

/// `(2n)^{-2n}`.
pub fn default_constant(n: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2 * n).pow(2 * n as u32))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Mode {
    Exhaustive { budget: u128 },
    Sampling { samples: usize, seed: u64 },
}

impl Default for Mode {
    fn default() -> Self {
        Mode::Exhaustive {
            budget: DEFAULT_ENUM_BUDGET,
        }
    }
}

/// Integer cutoffs for sequences of length `k`.
#[derive(Clone, Debug, Serialize)]
pub struct Threshold {
    pub k: usize,
    /// `S` is rare iff `|N(S)| <= rare_max`.
    pub rare_max: usize,
    /// `R` is an edge of the thresholded hypergraph iff `|N(R)| >= edge_min`
    /// (`N + 1` when no size qualifies).
    pub edge_min: usize,
    /// Float view of `c t^{k/(rd)} N`.
    pub value: f64,
}

/// The exact rarity test: `x <= c t^{k/(rd)} N` with `t = h / N^{r+d}` becomes
/// `x^{rd} cd^{rd} N^{(r+d)k} <= cn^{rd} h^k N^{rd}` after clearing denominators.
struct Cutoff {
    rd: u32,
    lhs_scale: BigUint,
    rhs: BigUint,
}

impl Cutoff {
    fn new(params: &DrcParams, h: &BigUint, n: usize, k: usize) -> Self {
        let rd = (params.r * params.d) as u32;
        let (cn, cd) = ratio_parts(&params.c);
        let nn = BigUint::from(n);
        Cutoff {
            rd,
            lhs_scale: cd.pow(rd) * nn.pow(((params.r + params.d) * k) as u32),
            rhs: cn.pow(rd) * h.pow(k as u32) * nn.pow(rd),
        }
    }

    fn lhs(&self, x: usize) -> BigUint {
        BigUint::from(x).pow(self.rd) * &self.lhs_scale
    }

    /// Largest `x` in `0..=n` with `lhs(x) <= rhs`.
    fn rare_max(&self, n: usize) -> usize {
        let (mut lo, mut hi) = (0usize, n);
        if self.lhs(n) <= self.rhs {
            return n;
        }
        // lhs(lo) <= rhs < lhs(hi)
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.lhs(mid) <= self.rhs {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Smallest `x` in `0..=n` with `lhs(x) >= rhs`, or `n + 1`.
    fn edge_min(&self, n: usize) -> usize {
        if self.lhs(n) < self.rhs {
            return n + 1;
        }
        let (mut lo, mut hi) = (0usize, n);
        if self.lhs(0) >= self.rhs {
            return 0;
        }
        // lhs(lo) < rhs <= lhs(hi)
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.lhs(mid) >= self.rhs {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

pub(crate) fn thresholds(params: &DrcParams, h: &BigUint, n: usize) -> Vec<Threshold> {
    let t = BigRational::new(
        BigInt::from(h.clone()),
        BigInt::from(BigUint::from(n).pow((params.r + params.d) as u32)),
    )
    .to_f64()
    .unwrap_or(0.0);
    let c = params.c.to_f64().unwrap_or(0.0);
    (0..=params.n)
        .map(|k| {
            let cut = Cutoff::new(params, h, n, k);
            Threshold {
                k,
                rare_max: cut.rare_max(n),
                edge_min: cut.edge_min(n),
                value: c * t.powf(k as f64 / (params.r * params.d) as f64) * n as f64,
            }
        })
        .collect()
}

/// One support set `W` of sequences `T` of length `r`.
#[derive(Clone, Debug, Serialize)]
pub struct SupportClass {
    pub support: Vec<usize>,
    /// Number of sequences `T` with this support.
    #[serde(serialize_with = "serialize_big")]
    pub multiplicity: BigUint,
    pub common: usize,
    /// Rare sequences of length `k` inside `N(T)`, for `k = d..=n`.
    pub rare: Vec<u128>,
    /// Smallest `k` for which `T` is bad.
    pub bad_at: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KTally {
    pub k: usize,
    /// Rare sequences among all `N^k` sequences of length `k`.
    #[serde(serialize_with = "serialize_big")]
    pub rare_sequences: BigUint,
    /// Sequences `T` bad with respect to `k`.
    #[serde(serialize_with = "serialize_big")]
    pub bad_sequences: BigUint,
    /// `X_k = Σ_{S rare} |N(S)|^r`, summed over rare `S`.
    #[serde(serialize_with = "serialize_big")]
    pub x_by_rare: BigUint,
    /// `X_k` as the number of pairs `(T, S)`, summed over `T`.
    #[serde(serialize_with = "serialize_big")]
    pub x_by_pairs: BigUint,
}

#[derive(Clone, Debug, Serialize)]
pub struct DrcReport {
    pub r: usize,
    pub d: usize,
    pub n: usize,
    pub c: ExactValue,
    pub vertices: usize,
    pub exhaustive: bool,
    /// `h_{K_{r,d}}(G) = Σ_T |N(T)|^d`.
    #[serde(serialize_with = "serialize_big")]
    pub h_krd: BigUint,
    pub t_krd: ExactValue,
    pub thresholds: Vec<Threshold>,
    pub tallies: Vec<KTally>,
    #[serde(serialize_with = "serialize_big")]
    pub good_sequences: BigUint,
    #[serde(serialize_with = "serialize_big")]
    pub bad_sequences: BigUint,
    /// `Σ_{T good} |N(T)|^d`; an estimate scaled by `N^r / samples` when sampling.
    pub good_sum: ExactValue,
    /// `2 · good_sum >= h_{K_{r,d}}(G)`.
    pub verdict: bool,
    /// `None` when the list would exceed [`MAX_LISTED_CLASSES`] entries.
    pub classes: Option<Vec<SupportClass>>,
    /// Good support sets with their common neighbourhoods, for the embedding pipeline.
    #[serde(skip)]
    pub(crate) good: Vec<(Vec<usize>, VertexSet, BigUint)>,
}

impl DrcReport {
    pub fn x_consistent(&self) -> bool {
        self.tallies.iter().all(|t| t.x_by_rare == t.x_by_pairs)
    }
}

/// Number of sets of size at most `k` drawn from `n` elements.
fn sets_up_to(n: usize, k: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    for j in 0..=k.min(n) {
        total = total.saturating_add(binom);
        binom = binom.saturating_mul((n - j) as u128) / (j as u128 + 1);
    }
    total
}

/// Visits every nonempty set `U` with `|U| <= max` and `N(U) != ∅`, in increasing
/// element order, with the words and size of its common neighbourhood.
fn for_each_support(g: &Graph, max: usize, f: &mut dyn FnMut(&[usize], &[u64], usize)) {
    let stride = words_for(g.n());
    // level `j` holds N(U) for the first `j` elements of U
    let mut stack = vec![0u64; stride * (max + 1)];
    stack[..stride].copy_from_slice(VertexSet::full(g.n()).words());
    let mut set = Vec::with_capacity(max);
    fn go(
        g: &Graph,
        max: usize,
        stride: usize,
        set: &mut Vec<usize>,
        stack: &mut [u64],
        f: &mut dyn FnMut(&[usize], &[u64], usize),
    ) {
        let depth = set.len();
        let start = set.last().map_or(0, |&v| v + 1);
        for v in start..g.n() {
            let (lower, upper) = stack.split_at_mut((depth + 1) * stride);
            let cur = &lower[depth * stride..];
            let next = &mut upper[..stride];
            let mut size = 0;
            for ((x, a), b) in next.iter_mut().zip(cur).zip(g.row(v)) {
                *x = a & b;
                size += x.count_ones() as usize;
            }
            if size == 0 {
                continue;
            }
            set.push(v);
            f(set, next, size);
            if set.len() < max {
                go(g, max, stride, set, stack, f);
            }
            set.pop();
        }
    }
    go(g, max, stride, &mut set, &mut stack, f);
}

fn h_krd(g: &Graph, r: usize, d: usize) -> BigUint {
    biclique_count(g, d as u32, r as u32)
}

pub fn drc_classify(g: &Graph, params: &DrcParams, mode: &Mode) -> Result<DrcReport> {
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let h = h_krd(g, params.r, params.d);
    if h.is_zero() {
        return Err(Error::Vacuous {
            r: params.r,
            d: params.d,
        });
    }
    let th = thresholds(params, &h, n);
    match mode {
        Mode::Exhaustive { budget } => {
            let requested = sets_up_to(n, params.n.max(params.r));
            if requested > *budget {
                return Err(Error::EnumerationBudget {
                    requested,
                    budget: *budget,
                    hint: "; use sampling mode",
                });
            }
            Ok(classify_exhaustive(g, params, h, th))
        }
        Mode::Sampling { samples, seed } => classify_sampled(g, params, h, th, *samples, *seed),
    }
}

fn base_report(g: &Graph, params: &DrcParams, h: BigUint, th: Vec<Threshold>) -> DrcReport {
    let n = g.n();
    let t = BigRational::new(
        BigInt::from(h.clone()),
        BigInt::from(BigUint::from(n).pow((params.r + params.d) as u32)),
    );
    DrcReport {
        r: params.r,
        d: params.d,
        n: params.n,
        c: ExactValue(params.c.clone()),
        vertices: n,
        exhaustive: true,
        h_krd: h,
        t_krd: ExactValue(t),
        thresholds: th,
        tallies: Vec::new(),
        good_sequences: BigUint::zero(),
        bad_sequences: BigUint::zero(),
        good_sum: ExactValue(BigRational::zero()),
        verdict: false,
        classes: None,
        good: Vec::new(),
    }
}

fn classify_exhaustive(g: &Graph, params: &DrcParams, h: BigUint, th: Vec<Threshold>) -> DrcReport {
    let n = g.n();
    let (r, d, nn) = (params.r, params.d, params.n);
    let ks: Vec<usize> = params.k_range().collect();
    let surj: Vec<Vec<u128>> = (0..=nn)
        .map(|k| {
            (0..=k)
                .map(|j| surjections(k as u32, j as u32).to_u128().expect("small"))
                .collect()
        })
        .collect();
    let rare_max: Vec<usize> = ks.iter().map(|&k| th[k].rare_max).collect();

    // Pass 1: rare supports U, spread over the supports W ⊆ N(U) of T.
    let mut non_rare: Vec<u128> = vec![0; ks.len()];
    let mut x_by_rare: Vec<BigUint> = vec![BigUint::zero(); ks.len()];
    let mut rare_in: HashMap<Vec<usize>, Vec<u128>> = HashMap::new();
    for_each_support(g, nn, &mut |u, common, size| {
        let j = u.len();
        let mut targets: Option<Vec<Vec<usize>>> = None;
        for (ki, &k) in ks.iter().enumerate() {
            if j > k {
                continue;
            }
            let w = surj[k][j];
            if size > rare_max[ki] {
                non_rare[ki] += w;
                continue;
            }
            x_by_rare[ki] += BigUint::from(w) * BigUint::from(size).pow(r as u32);
            let targets = targets
                .get_or_insert_with(|| subsets_up_to(&Ones::new(common).collect::<Vec<_>>(), r));
            for wset in targets.iter() {
                rare_in
                    .entry(wset.clone())
                    .or_insert_with(|| vec![0; ks.len()])[ki] += w;
            }
        }
    });

    // Pass 2: classify every support W of T with N(W) nonempty.
    let mut report = base_report(g, params, h, th);
    let mut bad_by_k = vec![BigUint::zero(); ks.len()];
    let mut x_by_pairs = vec![BigUint::zero(); ks.len()];
    let mut good_sum = BigUint::zero();
    let mut good_count = BigUint::zero();
    let mut visited = BigUint::zero();
    let mut classes = Vec::new();
    let mut listed = true;
    let mut good = Vec::new();
    let zeros = vec![0u128; ks.len()];
    let mults: Vec<BigUint> = (0..=r).map(|j| surjections(r as u32, j as u32)).collect();
    for_each_support(g, r, &mut |w, common, size| {
        let mult = &mults[w.len()];
        visited += mult;
        let rare = rare_in.get(w).unwrap_or(&zeros);
        let mut bad_at = None;
        for (ki, &k) in ks.iter().enumerate() {
            if rare[ki] > 0 {
                x_by_pairs[ki] += mult * BigUint::from(rare[ki]);
            }
            let lhs = (2 * nn as u128).saturating_mul(rare[ki]);
            if lhs >= (size as u128).saturating_pow(k as u32) {
                bad_by_k[ki] += mult;
                bad_at.get_or_insert(k);
            }
        }
        if bad_at.is_none() {
            good_sum += mult * BigUint::from(size).pow(d as u32);
            good_count += mult;
            good.push((
                w.to_vec(),
                VertexSet::from_words(n, common.to_vec()),
                mult.clone(),
            ));
        }
        if listed {
            if classes.len() >= MAX_LISTED_CLASSES {
                listed = false;
                classes.clear();
            } else {
                classes.push(SupportClass {
                    support: w.to_vec(),
                    multiplicity: mult.clone(),
                    common: size,
                    rare: rare.clone(),
                    bad_at,
                });
            }
        }
    });
    // T with N(T) = ∅ has 0 rare sequences and |N(T)|^k = 0: bad at every k.
    let all_t = BigUint::from(n).pow(r as u32);
    let empty = &all_t - &visited;
    for b in bad_by_k.iter_mut() {
        *b += &empty;
    }

    report.tallies = ks
        .iter()
        .enumerate()
        .map(|(ki, &k)| KTally {
            k,
            rare_sequences: BigUint::from(n).pow(k as u32) - non_rare[ki],
            bad_sequences: bad_by_k[ki].clone(),
            x_by_rare: x_by_rare[ki].clone(),
            x_by_pairs: x_by_pairs[ki].clone(),
        })
        .collect();
    report.bad_sequences = &all_t - &good_count;
    report.good_sequences = good_count;
    report.verdict = BigUint::from(2u32) * &good_sum >= report.h_krd;
    report.good_sum = ExactValue(BigRational::from_integer(BigInt::from(good_sum)));
    report.classes = listed.then_some(classes);
    report.good = good;
    report
}

/// Nonempty subsets of `items` with at most `max` elements, each sorted.
fn subsets_up_to(items: &[usize], max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn go(
        items: &[usize],
        start: usize,
        max: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        for i in start..items.len() {
            cur.push(items[i]);
            out.push(cur.clone());
            if cur.len() < max {
                go(items, i + 1, max, cur, out);
            }
            cur.pop();
        }
    }
    go(items, 0, max, &mut Vec::new(), &mut out);
    out
}

fn classify_sampled(
    g: &Graph,
    params: &DrcParams,
    h: BigUint,
    th: Vec<Threshold>,
    samples: usize,
    seed: u64,
) -> Result<DrcReport> {
    if samples == 0 {
        return Err(Error::InvalidParameter(
            "sampling needs at least one sample".into(),
        ));
    }
    let n = g.n();
    let (r, d, nn) = (params.r, params.d, params.n);
    let ks: Vec<usize> = params.k_range().collect();
    let mut rng = crate::generators::rng(seed);
    let mut report = base_report(g, params, h, th.clone());
    report.exhaustive = false;

    let mut good_hits = 0u64;
    let mut good_sum = BigUint::zero();
    let mut bad_by_k = vec![0u64; ks.len()];
    let mut rare_hits = vec![0u64; ks.len()];
    for _ in 0..samples {
        let t: Vec<usize> = (0..r).map(|_| rng.gen_range(0..n)).collect();
        let common = g.common_neighborhood_unchecked(&t).to_vec();
        let mut bad = false;
        for (ki, &k) in ks.iter().enumerate() {
            // global rare rate, from uniform sequences in V^k
            let s: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
            if g.common_neighborhood_len(&s) <= th[k].rare_max {
                rare_hits[ki] += 1;
            }
            if common.is_empty() {
                bad_by_k[ki] += 1;
                bad = true;
                continue;
            }
            let mut rare = 0u64;
            for _ in 0..samples {
                let s: Vec<usize> = (0..k)
                    .map(|_| common[rng.gen_range(0..common.len())])
                    .collect();
                if g.common_neighborhood_len(&s) <= th[k].rare_max {
                    rare += 1;
                }
            }
            // estimated fraction rare/samples compared with 1/(2n)
            if 2 * nn as u64 * rare >= samples as u64 {
                bad_by_k[ki] += 1;
                bad = true;
            }
        }
        if !bad {
            good_hits += 1;
            good_sum += BigUint::from(common.len()).pow(d as u32);
        }
    }
    let scale = |hits: u64, total: BigUint| -> BigUint {
        total * BigUint::from(hits) / BigUint::from(samples)
    };
    let all_t = BigUint::from(n).pow(r as u32);
    report.tallies = ks
        .iter()
        .enumerate()
        .map(|(ki, &k)| KTally {
            k,
            rare_sequences: scale(rare_hits[ki], BigUint::from(n).pow(k as u32)),
            bad_sequences: scale(bad_by_k[ki], all_t.clone()),
            x_by_rare: BigUint::zero(),
            x_by_pairs: BigUint::zero(),
        })
        .collect();
    report.good_sequences = scale(good_hits, all_t.clone());
    report.bad_sequences = &all_t - &report.good_sequences;
    let estimate = BigRational::new(BigInt::from(good_sum * &all_t), BigInt::from(samples));
    report.verdict = estimate.clone() * BigRational::from_integer(2.into())
        >= BigRational::from_integer(BigInt::from(report.h_krd.clone()));
    report.good_sum = ExactValue(estimate);
    Ok(report)
}

/// Verdict record: both sides of `good_sum >= h_{K_{r,d}}(G) / 2`.
#[derive(Clone, Debug, Serialize)]
pub struct DrcVerdict {
    pub r: usize,
    pub d: usize,
    pub n: usize,
    pub c: ExactValue,
    #[serde(serialize_with = "serialize_big")]
    pub good_sum: BigUint,
    /// `h_{K_{r,d}}(G)` recomputed from the sequence sum.
    #[serde(serialize_with = "serialize_big")]
    pub h_krd: BigUint,
    pub half_h: ExactValue,
    pub holds: bool,
    pub x_consistent: bool,
}

pub fn drc_verify(g: &Graph, params: &DrcParams, budget: u128) -> Result<DrcVerdict> {
    let report = drc_classify(g, params, &Mode::Exhaustive { budget })?;
    let n = g.n() as u128;
    let h = if n.checked_pow(params.r as u32).is_some_and(|x| x <= 1 << 20) {
        biclique_count_sequences(g, params.d as u32, params.r as u32)
    } else {
        h_krd(g, params.r, params.d)
    };
    let good_sum = report
        .good_sum
        .0
        .to_integer()
        .to_biguint()
        .expect("nonnegative");
    Ok(DrcVerdict {
        r: params.r,
        d: params.d,
        n: params.n,
        c: report.c.clone(),
        holds: BigUint::from(2u32) * &good_sum >= h,
        half_h: ExactValue(BigRational::new(BigInt::from(h.clone()), BigInt::from(2))),
        good_sum,
        h_krd: h,
        x_consistent: report.x_consistent(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio_of;
    use crate::generators::{generate, Family, GenSpec};

    fn params(r: usize, d: usize, n: usize, c: Option<BigRational>) -> DrcParams {
        DrcParams::new(r, d, n, c).unwrap()
    }

    /// Literal classification over all `T ∈ V^r` and `S ∈ N(T)^k`.
    fn oracle(g: &Graph, p: &DrcParams) -> (BigUint, Vec<u128>) {
        let n = g.n();
        let h = h_krd(g, p.r, p.d);
        let th = thresholds(p, &h, n);
        let seqs = |len: usize, over: &[usize]| -> Vec<Vec<usize>> {
            let mut out = vec![vec![]];
            for _ in 0..len {
                out = out
                    .into_iter()
                    .flat_map(|s| over.iter().map(move |&v| [s.clone(), vec![v]].concat()))
                    .collect();
            }
            out
        };
        let all: Vec<usize> = (0..n).collect();
        let mut good_sum = BigUint::zero();
        let mut x = vec![0u128; p.n + 1];
        for t in seqs(p.r, &all) {
            let nt = g.common_neighborhood(&t).unwrap().to_vec();
            let mut good = true;
            for k in p.k_range() {
                let rare = seqs(k, &nt)
                    .iter()
                    .filter(|s| g.common_neighborhood(s).unwrap().len() <= th[k].rare_max)
                    .count() as u128;
                x[k] += rare;
                if 2 * p.n as u128 * rare >= (nt.len() as u128).pow(k as u32) {
                    good = false;
                }
            }
            if good {
                good_sum += BigUint::from(nt.len()).pow(p.d as u32);
            }
        }
        (good_sum, x)
    }

    #[test]
    fn cutoffs_match_rational_test() {
        let g = generate(&GenSpec::new(Family::TwoCliques { n: 8 }, 0)).unwrap();
        let p = params(1, 2, 3, Some(ratio_of(1, 3)));
        let h = h_krd(&g, 1, 2);
        let t = BigRational::new(BigInt::from(h.clone()), BigInt::from(8u32.pow(3)));
        for th in thresholds(&p, &h, 8) {
            for x in 0..=8usize {
                // x <= c t^{k/2} N  iff  x^2 <= c^2 t^k N^2
                let lhs = ratio_of(x * x, 1);
                let rhs = &p.c * &p.c * num_traits::pow(t.clone(), th.k) * ratio_of(64, 1);
                assert_eq!(x <= th.rare_max, lhs <= rhs, "k={} x={x}", th.k);
                assert_eq!(x >= th.edge_min, lhs >= rhs, "k={} x={x}", th.k);
            }
        }
    }

    #[test]
    fn agrees_with_literal_oracle() {
        let graphs = [
            generate(&GenSpec::new(Family::TwoCliques { n: 6 }, 0)).unwrap(),
            generate(&GenSpec::gnp(6, "1/2".parse().unwrap(), 4)).unwrap(),
            crate::generators::cycle(5),
        ];
        for g in &graphs {
            for (r, d, n) in [(1, 1, 3), (1, 2, 3), (2, 2, 3)] {
                for c in [None, Some(ratio_of(1, 2)), Some(ratio_of(1, 1))] {
                    let p = params(r, d, n, c);
                    let rep = drc_classify(g, &p, &Mode::default()).unwrap();
                    let (good, x) = oracle(g, &p);
                    assert_eq!(
                        rep.good_sum.0,
                        BigRational::from_integer(BigInt::from(good))
                    );
                    for t in &rep.tallies {
                        assert_eq!(t.x_by_pairs, BigUint::from(x[t.k]));
                        assert_eq!(t.x_by_rare, t.x_by_pairs);
                    }
                }
            }
        }
    }

    #[test]
    fn complete_graph_has_no_rare_sequences() {
        let g = Graph::complete(10);
        let rep = drc_classify(&g, &params(1, 1, 3, None), &Mode::default()).unwrap();
        assert!(rep.tallies.iter().all(|t| t.rare_sequences.is_zero()));
        assert_eq!(rep.good_sequences, BigUint::from(10u32));
        assert_eq!(rep.good_sum.0, BigRational::from_integer(BigInt::from(90)));
        assert!(rep.verdict);
    }

    #[test]
    fn cross_clique_pair_is_rare() {
        let g = generate(&GenSpec::new(Family::TwoCliques { n: 10 }, 0)).unwrap();
        let rep = drc_classify(&g, &params(1, 2, 3, None), &Mode::default()).unwrap();
        assert!(g.common_neighborhood(&[0, 9]).unwrap().is_empty());
        assert!(rep.tallies[0].rare_sequences >= BigUint::from(50u32));
    }

    #[test]
    fn vacuous_and_verify() {
        let e = drc_classify(&Graph::empty(4), &params(1, 1, 3, None), &Mode::default());
        assert!(matches!(e, Err(Error::Vacuous { .. })));
        assert!(
            drc_verify(
                &Graph::complete(5),
                &params(1, 1, 3, None),
                DEFAULT_ENUM_BUDGET
            )
            .unwrap()
            .holds
        );
        let tc = generate(&GenSpec::new(Family::TwoCliques { n: 12 }, 0)).unwrap();
        let v = drc_verify(&tc, &params(2, 2, 4, None), DEFAULT_ENUM_BUDGET).unwrap();
        assert!(v.holds && v.x_consistent);
        let g = generate(&GenSpec::gnp(20, "1/2".parse().unwrap(), 7)).unwrap();
        assert!(
            drc_verify(&g, &params(1, 2, 4, None), DEFAULT_ENUM_BUDGET)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn budget_and_sampling() {
        let g = generate(&GenSpec::gnp(30, "1/2".parse().unwrap(), 1)).unwrap();
        let p = params(1, 1, 3, None);
        let e = drc_classify(&g, &p, &Mode::Exhaustive { budget: 10 });
        assert!(matches!(e, Err(Error::EnumerationBudget { .. })));
        let s = drc_classify(
            &g,
            &p,
            &Mode::Sampling {
                samples: 50,
                seed: 3,
            },
        )
        .unwrap();
        assert!(!s.exhaustive);
        let again = drc_classify(
            &g,
            &p,
            &Mode::Sampling {
                samples: 50,
                seed: 3,
            },
        )
        .unwrap();
        assert_eq!(s.good_sum, again.good_sum);
    }
}
