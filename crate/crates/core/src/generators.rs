//! Seeded graph families and named pattern shorthands.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::index;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pattern::PatternGraph;

/// Identifier of the pseudo-random stream behind every seeded construction.
pub const RNG_ID: &str = "ChaCha8Rng (rand_chacha 0.3, seed_from_u64)";

/// Edge-inclusion rule: pair `(u, v)`, `u < v`, visited in lexicographic order,
/// is kept iff the next 64-bit draw `x` satisfies `x / 2^64 < p`.
pub const EDGE_RULE: &str = "lexicographic pairs, keep iff u64 draw < p * 2^64";

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A probability `num/den` with `0 <= num <= den`, written `"a/b"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Prob {
    num: u64,
    den: u64,
}

impl Prob {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::InvalidParameter(format!(
                "probability {num}/{den} is outside [0, 1]"
            )));
        }
        Ok(Prob { num, den })
    }

    pub fn ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    fn accepts(&self, draw: u64) -> bool {
        (draw as u128) * (self.den as u128) < (self.num as u128) << 64
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Prob {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse probability {s:?}"));
        let r = crate::exact::parse_ratio(s).ok_or_else(bad)?;
        let num: u64 = r.numer().try_into().map_err(|_| bad())?;
        let den: u64 = r.denom().try_into().map_err(|_| bad())?;
        Prob::new(num, den)
    }
}

impl Serialize for Prob {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Prob {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Gnp {
        n: usize,
        p: Prob,
    },
    /// Parts `0..n1` and `n1..n1+n2`, cross pairs kept with probability `p`.
    RandomBipartite {
        n1: usize,
        n2: usize,
        p: Prob,
    },
    Complete {
        n: usize,
    },
    CompleteBipartite {
        a: usize,
        b: usize,
    },
    /// `k` edges on `k + 1` vertices.
    Path {
        k: usize,
    },
    Cycle {
        n: usize,
    },
    /// Centre 0 and `k` leaves.
    Star {
        k: usize,
    },
    Hypercube {
        dim: u32,
    },
    Paley {
        q: u64,
    },
    TwoCliques {
        n: usize,
    },
    /// Every vertex of `base` replaced by an independent set of size `t`.
    BlowUp {
        base: String,
        t: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default)]
    pub seed: u64,
}

impl GenSpec {
    pub fn new(family: Family, seed: u64) -> Self {
        GenSpec { family, seed }
    }

    pub fn gnp(n: usize, p: Prob, seed: u64) -> Self {
        GenSpec::new(Family::Gnp { n, p }, seed)
    }

    pub fn is_random(&self) -> bool {
        matches!(
            self.family,
            Family::Gnp { .. } | Family::RandomBipartite { .. }
        )
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}

fn positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::InvalidParameter(format!("{name} must be positive")));
    }
    Ok(())
}

pub fn generate(spec: &GenSpec) -> Result<Graph> {
    match &spec.family {
        Family::Gnp { n, p } => {
            positive("n", *n)?;
            let mut rng = rng(spec.seed);
            let mut edges = Vec::new();
            for u in 0..*n {
                for v in u + 1..*n {
                    if p.accepts(rng.next_u64()) {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(*n, &edges)
        }
        Family::RandomBipartite { n1, n2, p } => {
            positive("n1", *n1)?;
            positive("n2", *n2)?;
            let mut rng = rng(spec.seed);
            let mut edges = Vec::new();
            for u in 0..*n1 {
                for v in 0..*n2 {
                    if p.accepts(rng.next_u64()) {
                        edges.push((u, n1 + v));
                    }
                }
            }
            Graph::from_edges(n1 + n2, &edges)
        }
        Family::Complete { n } => {
            positive("n", *n)?;
            Ok(Graph::complete(*n))
        }
        Family::CompleteBipartite { a, b } => {
            positive("a", *a)?;
            positive("b", *b)?;
            Ok(complete_bipartite(*a, *b))
        }
        Family::Path { k } => Ok(path(*k)),
        Family::Cycle { n } => {
            if *n < 3 {
                return Err(Error::InvalidParameter(format!(
                    "cycle length {n} is below 3"
                )));
            }
            Ok(cycle(*n))
        }
        Family::Star { k } => Ok(star(*k)),
        Family::Hypercube { dim } => {
            if *dim > 16 {
                return Err(Error::InvalidParameter(format!(
                    "hypercube dimension {dim} is above 16"
                )));
            }
            Ok(hypercube(*dim))
        }
        Family::Paley { q } => paley(*q),
        Family::TwoCliques { n } => {
            positive("n", *n)?;
            Ok(Graph::complete(n / 2).disjoint_union(&Graph::complete(n - n / 2)))
        }
        Family::BlowUp { base, t } => {
            positive("t", *t)?;
            let g = shorthand(base)?;
            let mut edges = Vec::new();
            for (u, v) in g.edges() {
                for i in 0..*t {
                    for j in 0..*t {
                        edges.push((u * t + i, v * t + j));
                    }
                }
            }
            Graph::from_edges(g.n() * t, &edges)
        }
    }
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let edges: Vec<_> = (0..a)
        .flat_map(|u| (0..b).map(move |v| (u, a + v)))
        .collect();
    Graph::from_edges(a + b, &edges).expect("valid")
}

pub fn path(k: usize) -> Graph {
    let edges: Vec<_> = (0..k).map(|i| (i, i + 1)).collect();
    Graph::from_edges(k + 1, &edges).expect("valid")
}

pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges).expect("valid")
}

pub fn star(k: usize) -> Graph {
    let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
    Graph::from_edges(k + 1, &edges).expect("valid")
}

pub fn hypercube(dim: u32) -> Graph {
    let n = 1usize << dim;
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (0..dim).map(move |b| (u, u ^ (1 << b))))
        .filter(|&(u, v)| u < v)
        .collect();
    Graph::from_edges(n, &edges).expect("valid")
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

pub fn paley(q: u64) -> Result<Graph> {
    if !is_prime(q) || q % 4 != 1 {
        return Err(Error::InvalidParameter(format!(
            "paley modulus {q} must be a prime congruent to 1 mod 4"
        )));
    }
    let mut residue = vec![false; q as usize];
    for x in 1..q {
        residue[(x * x % q) as usize] = true;
    }
    let n = q as usize;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if residue[v - u] {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Toggles `flips` distinct vertex pairs chosen uniformly by the seeded stream.
pub fn perturb(g: &Graph, flips: usize, seed: u64) -> Result<Graph> {
    let n = g.n();
    let pairs = n * n.saturating_sub(1) / 2;
    if flips > pairs {
        return Err(Error::InvalidParameter(format!(
            "{flips} flips requested but the graph has only {pairs} vertex pairs"
        )));
    }
    let mut out = g.clone();
    let mut rng = rng(seed);
    let mut chosen = index::sample(&mut rng, pairs, flips).into_vec();
    chosen.sort_unstable();
    // pair index runs over rows u = 0, 1, ... holding v = u+1..n
    let mut u = 0;
    let mut row_start = 0;
    for idx in chosen {
        while idx >= row_start + (n - 1 - u) {
            row_start += n - 1 - u;
            u += 1;
        }
        out.toggle_edge(u, u + 1 + (idx - row_start));
    }
    Ok(out)
}

/// Expands `K5`, `K_{2,3}`, `P_3`, `C6`, `Q3`, `S_4` and `+`-joined disjoint unions.
pub fn shorthand(name: &str) -> Result<Graph> {
    let name = name.trim();
    if name.contains('+') {
        let mut parts = name.split('+').map(shorthand);
        let first = parts.next().expect("split yields one part")?;
        return parts.try_fold(first, |acc, g| Ok(acc.disjoint_union(&g?)));
    }
    let bad = || Error::InvalidParameter(format!("unknown pattern shorthand {name:?}"));
    let mut chars = name.chars();
    let head = chars.next().ok_or_else(bad)?;
    let rest: String = chars.filter(|c| !matches!(c, '_' | '{' | '}')).collect();
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    match head {
        'K' if rest.contains(',') => {
            let (a, b) = rest.split_once(',').ok_or_else(bad)?;
            let (a, b) = (num(a)?, num(b)?);
            positive("a", a)?;
            positive("b", b)?;
            Ok(complete_bipartite(a, b))
        }
        'K' => {
            let n = num(&rest)?;
            positive("n", n)?;
            Ok(Graph::complete(n))
        }
        'P' => Ok(path(num(&rest)?)),
        'C' => generate(&GenSpec::new(Family::Cycle { n: num(&rest)? }, 0)),
        'Q' => generate(&GenSpec::new(
            Family::Hypercube {
                dim: num(&rest)? as u32,
            },
            0,
        )),
        'S' => Ok(star(num(&rest)?)),
        _ => Err(bad()),
    }
}

/// Shorthand expanded and 2-coloured; for `K_{a,b}` the first part is the `a` side.
pub fn pattern_shorthand(name: &str) -> Result<PatternGraph> {
    PatternGraph::from_graph(shorthand(name)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paley_five_is_c5() {
        let g = paley(5).unwrap();
        assert_eq!(g, cycle(5));
        assert!(paley(7).is_err());
        assert!(paley(9).is_err());
    }

    #[test]
    fn paley_edge_count() {
        for q in [13u64, 17, 29, 37] {
            let g = paley(q).unwrap();
            assert_eq!(g.edge_count() as u64, q * (q - 1) / 4);
            assert!(g.degrees().iter().all(|&d| d as u64 == (q - 1) / 2));
        }
    }

    #[test]
    fn structured_families() {
        let q3 = hypercube(3);
        assert_eq!((q3.n(), q3.edge_count()), (8, 12));
        assert!(q3.degrees().iter().all(|&d| d == 3));
        let tc = generate(&GenSpec::new(Family::TwoCliques { n: 10 }, 0)).unwrap();
        assert!(tc.degrees().iter().all(|&d| d == 4));
        let odd = generate(&GenSpec::new(Family::TwoCliques { n: 7 }, 0)).unwrap();
        assert_eq!(odd.edge_count(), 3 + 6);
        let b = generate(&GenSpec::new(
            Family::BlowUp {
                base: "K2".into(),
                t: 3,
            },
            0,
        ))
        .unwrap();
        assert_eq!(b, complete_bipartite(3, 3));
    }

    #[test]
    fn invalid_parameters() {
        assert!("3/2".parse::<Prob>().is_err());
        assert!(generate(&GenSpec::new(Family::Complete { n: 0 }, 0)).is_err());
        assert!(generate(&GenSpec::new(Family::Cycle { n: 2 }, 0)).is_err());
    }

    #[test]
    fn gnp_extremes_and_replay() {
        let zero = generate(&GenSpec::gnp(20, Prob::new(0, 1).unwrap(), 1)).unwrap();
        assert_eq!(zero.edge_count(), 0);
        let one = generate(&GenSpec::gnp(20, Prob::new(1, 1).unwrap(), 1)).unwrap();
        assert_eq!(one, Graph::complete(20));
        let half = Prob::new(1, 2).unwrap();
        let a = generate(&GenSpec::gnp(60, half, 9)).unwrap();
        assert_eq!(a, generate(&GenSpec::gnp(60, half, 9)).unwrap());
        assert_ne!(a, generate(&GenSpec::gnp(60, half, 10)).unwrap());
    }

    #[test]
    fn perturb_examples() {
        let k3 = Graph::complete(3);
        assert_eq!(perturb(&k3, 0, 5).unwrap(), k3);
        assert_eq!(perturb(&k3, 3, 5).unwrap().edge_count(), 0);
        let g = cycle(9);
        assert_eq!(perturb(&g, 7, 2).unwrap(), perturb(&g, 7, 2).unwrap());
        assert!(perturb(&k3, 4, 0).is_err());
    }

    #[test]
    fn shorthands() {
        assert_eq!(shorthand("K_{2,3}").unwrap(), complete_bipartite(2, 3));
        assert_eq!(shorthand("K2,3").unwrap(), complete_bipartite(2, 3));
        assert_eq!(shorthand("P_3").unwrap(), path(3));
        assert_eq!(shorthand("C4").unwrap(), cycle(4));
        assert_eq!(shorthand("S_4").unwrap(), star(4));
        assert_eq!(shorthand("Q3").unwrap(), hypercube(3));
        assert_eq!(shorthand("K3").unwrap(), Graph::complete(3));
        assert_eq!(
            shorthand("C6+C6").unwrap(),
            cycle(6).disjoint_union(&cycle(6))
        );
        assert!(shorthand("X9").is_err());
        let k = pattern_shorthand("K_{1,3}").unwrap();
        assert_eq!(k.part1(), vec![0]);
    }

    #[test]
    fn spec_round_trip() {
        let s = GenSpec::gnp(50, "3/10".parse().unwrap(), 1);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"family":"gnp","n":50,"p":"3/10","seed":1}"#);
        assert_eq!(serde_json::from_str::<GenSpec>(&text).unwrap(), s);
    }
}
