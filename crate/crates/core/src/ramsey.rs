//! Monochromatic densities under 2-edge-colourings of `K_N` and exact small
//! multiplicity constants `c_{H,N}`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{falling_factorial, ratio_of, serialize_big, ExactValue};
use crate::graph::Graph;
use crate::homcount::{injective_count, Counter};
use crate::pattern::PatternGraph;

/// Largest `N` the exhaustive scan accepts (`2^21` colourings).
pub const MAX_EXHAUSTIVE_N: usize = 7;

/// Red edges of a 2-colouring of `K_N`; blue is the complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    red: Graph,
}

impl Coloring {
    pub fn new(red: Graph) -> Self {
        Coloring { red }
    }

    pub fn n(&self) -> usize {
        self.red.n()
    }

    pub fn red(&self) -> &Graph {
        &self.red
    }

    pub fn blue(&self) -> Graph {
        self.red.complement()
    }

    pub fn swapped(&self) -> Coloring {
        Coloring { red: self.blue() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Fraction of injective copies that are monochromatic.
    Injective,
    /// `t_H(red) + t_H(blue)`.
    Homomorphism,
}

pub fn mono_density(col: &Coloring, h: &PatternGraph, variant: Variant) -> Result<BigRational> {
    let hg = h.graph();
    let n = col.n();
    match variant {
        Variant::Injective => {
            let total = falling_factorial(n as u64, hg.n() as u32);
            if total.is_zero() {
                return Err(Error::InvalidParameter(format!(
                    "K_{n} has no injective copy of a {}-vertex pattern",
                    hg.n()
                )));
            }
            let mono = injective_count(hg, col.red()) + injective_count(hg, &col.blue());
            Ok(BigRational::new(BigInt::from(mono), BigInt::from(total)))
        }
        Variant::Homomorphism => {
            let c = Counter::default();
            Ok(c.density(hg, col.red())?.to_ratio() + c.density(hg, &col.blue())?.to_ratio())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ScanMode {
    Exhaustive,
    Random { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub n: usize,
    pub m: usize,
    pub mode: ScanMode,
    /// `2^{C(N,2)}`.
    #[serde(serialize_with = "serialize_big")]
    pub colorings: BigUint,
    /// Colourings actually evaluated (the exhaustive scan fixes the colour of one
    /// edge, using red/blue symmetry).
    pub evaluated: u64,
    /// Monochromatic injective copies in the best colouring.
    #[serde(serialize_with = "serialize_big")]
    pub min_mono: BigUint,
    /// `N (N-1) ... (N-|H|+1)`.
    #[serde(serialize_with = "serialize_big")]
    pub injections: BigUint,
    /// `|Aut(H)|`.
    #[serde(serialize_with = "serialize_big")]
    pub automorphisms: BigUint,
    /// Unlabelled counts: `min_mono / |Aut|` of `injections / |Aut|` copies.
    #[serde(serialize_with = "serialize_big")]
    pub mono_copies: BigUint,
    #[serde(serialize_with = "serialize_big")]
    pub copies: BigUint,
    /// `c_{H,N}` (exhaustive) or an upper bound on it (random).
    pub value: ExactValue,
    pub upper_bound_only: bool,
    pub argmin_red_edges: Vec<(usize, usize)>,
    /// `2^{1-m}`.
    pub random_bound: ExactValue,
    pub within_random_bound: bool,
}

/// Incrementally maintained `Σ_{a≠c} codeg(a,c)(codeg(a,c) - 1)`, the injective
/// C4 count, for one colour class on at most 64 vertices.
struct C4State {
    rows: Vec<u64>,
    codeg: Vec<Vec<i64>>,
    sum: i64,
}

impl C4State {
    fn new(g: &Graph) -> Self {
        let n = g.n();
        let rows: Vec<u64> = (0..n)
            .map(|v| g.neighbors(v).fold(0u64, |r, u| r | 1 << u))
            .collect();
        let mut codeg = vec![vec![0i64; n]; n];
        let mut sum = 0;
        for a in 0..n {
            for c in 0..n {
                if a != c {
                    let x = (rows[a] & rows[c]).count_ones() as i64;
                    codeg[a][c] = x;
                    sum += x * (x - 1);
                }
            }
        }
        C4State { rows, codeg, sum }
    }

    fn bump(&mut self, a: usize, c: usize, delta: i64) {
        for (x, y) in [(a, c), (c, a)] {
            let old = self.codeg[x][y];
            let new = old + delta;
            self.sum += new * (new - 1) - old * (old - 1);
            self.codeg[x][y] = new;
        }
    }

    /// Toggles edge `uv`: `u` gains or loses `v` as a common neighbour with every
    /// neighbour of `v`, and symmetrically.
    fn toggle(&mut self, u: usize, v: usize) {
        let adding = self.rows[u] >> v & 1 == 0;
        let delta = if adding { 1 } else { -1 };
        let (nu, nv) = (self.rows[u] & !(1 << v), self.rows[v] & !(1 << u));
        for x in bits(nv) {
            self.bump(u, x, delta);
        }
        for x in bits(nu) {
            self.bump(v, x, delta);
        }
        self.rows[u] ^= 1 << v;
        self.rows[v] ^= 1 << u;
    }
}

fn bits(mut x: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (x != 0).then(|| {
            let b = x.trailing_zeros() as usize;
            x &= x - 1;
            b
        })
    })
}

fn is_c4(h: &Graph) -> bool {
    h.n() == 4 && h.edge_count() == 4 && h.is_connected() && h.degrees().iter().all(|&d| d == 2)
}

pub fn multiplicity_scan(h: &PatternGraph, n: usize, mode: &ScanMode) -> Result<ScanReport> {
    let hg = h.graph();
    let injections = falling_factorial(n as u64, hg.n() as u32);
    if injections.is_zero() {
        return Err(Error::InvalidParameter(format!(
            "N = {n} is smaller than the pattern's {} vertices",
            hg.n()
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mono_of = |red: &Graph| -> BigUint {
        injective_count(hg, red) + injective_count(hg, &red.complement())
    };
    let (min_mono, argmin, evaluated) = match mode {
        ScanMode::Exhaustive => {
            if n > MAX_EXHAUSTIVE_N {
                return Err(Error::EnumerationBudget {
                    requested: 1u128 << pairs.len().min(127),
                    budget: 1 << 21,
                    hint: "; exhaustive scans stop at N = 7, use random mode",
                });
            }
            exhaustive(hg, n, &pairs, &mono_of)
        }
        ScanMode::Random { samples, seed } => {
            if *samples == 0 {
                return Err(Error::InvalidParameter(
                    "random scan needs at least one sample".into(),
                ));
            }
            let mut rng = crate::generators::rng(*seed);
            let mut best: Option<(BigUint, Graph)> = None;
            for _ in 0..*samples {
                let edges: Vec<(usize, usize)> = pairs
                    .iter()
                    .copied()
                    .filter(|_| rng.gen::<bool>())
                    .collect();
                let red = Graph::from_edges(n, &edges)?;
                let mono = mono_of(&red);
                if best.as_ref().is_none_or(|(b, _)| mono < *b) {
                    best = Some((mono, red));
                }
            }
            let (m, g) = best.expect("samples >= 1");
            (m, g, *samples)
        }
    };
    let automorphisms = injective_count(hg, hg);
    let value = BigRational::new(
        BigInt::from(min_mono.clone()),
        BigInt::from(injections.clone()),
    );
    let random_bound = random_coloring_bound(h.m());
    Ok(ScanReport {
        n,
        m: h.m(),
        mode: mode.clone(),
        colorings: BigUint::from(2u32).pow(pairs.len() as u32),
        evaluated,
        mono_copies: &min_mono / &automorphisms,
        copies: &injections / &automorphisms,
        min_mono,
        injections,
        automorphisms,
        within_random_bound: value <= random_bound,
        value: ExactValue(value),
        upper_bound_only: matches!(mode, ScanMode::Random { .. }),
        argmin_red_edges: argmin.edges(),
        random_bound: ExactValue(random_bound),
    })
}

/// Gray-code walk over colourings with pair 0 fixed red; the first minimum in
/// walk order wins.
fn exhaustive(
    hg: &Graph,
    n: usize,
    pairs: &[(usize, usize)],
    mono_of: &dyn Fn(&Graph) -> BigUint,
) -> (BigUint, Graph, u64) {
    if pairs.is_empty() {
        let red = Graph::empty(n);
        return (mono_of(&red), red, 1);
    }
    let free = pairs.len() - 1;
    let total = 1u64 << free;
    let mut red = Graph::from_edges(n, &pairs[..1]).expect("valid");
    let mut best_code = 0u64;
    if is_c4(hg) {
        let mut r = C4State::new(&red);
        let mut b = C4State::new(&red.complement());
        let mut best = r.sum + b.sum;
        let mut code = 0u64;
        for i in 1..total {
            let bit = i.trailing_zeros() as usize;
            let (u, v) = pairs[bit + 1];
            r.toggle(u, v);
            b.toggle(u, v);
            code ^= 1 << bit;
            let s = r.sum + b.sum;
            if s < best {
                best = s;
                best_code = code;
            }
        }
        for (bit, &(u, v)) in pairs[1..].iter().enumerate() {
            if best_code >> bit & 1 == 1 {
                red.set_edge(u, v, true);
            }
        }
        return (BigUint::from(best as u64), red, total);
    }
    let mut best = mono_of(&red);
    let mut best_red = red.clone();
    for i in 1..total {
        let bit = i.trailing_zeros() as usize;
        let (u, v) = pairs[bit + 1];
        red.toggle_edge(u, v);
        let mono = mono_of(&red);
        if mono < best {
            best = mono;
            best_red = red.clone();
        }
    }
    (best, best_red, total)
}

/// `2^{1-m}`, the expected monochromatic fraction under a uniform colouring.
pub fn random_coloring_bound(m: usize) -> BigRational {
    if m == 0 {
        return ratio_of(2, 1);
    }
    BigRational::new(BigInt::one(), BigInt::from(2).pow(m as u32 - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio_int;
    use crate::generators::{generate, pattern_shorthand, GenSpec};

    fn c4() -> PatternGraph {
        pattern_shorthand("C4").unwrap()
    }

    #[test]
    fn densities() {
        let all_red = Coloring::new(Graph::complete(6));
        assert_eq!(
            mono_density(&all_red, &c4(), Variant::Injective).unwrap(),
            ratio_int(1)
        );
        let k2 = pattern_shorthand("K2").unwrap();
        let g = generate(&GenSpec::gnp(9, "1/2".parse().unwrap(), 1)).unwrap();
        let col = Coloring::new(g);
        assert_eq!(
            mono_density(&col, &k2, Variant::Injective).unwrap(),
            ratio_int(1)
        );
        assert_eq!(
            mono_density(&col, &c4(), Variant::Injective).unwrap(),
            mono_density(&col.swapped(), &c4(), Variant::Injective).unwrap()
        );
        let g = generate(&GenSpec::gnp(30, "1/2".parse().unwrap(), 8)).unwrap();
        let d = mono_density(&Coloring::new(g), &c4(), Variant::Homomorphism).unwrap();
        let x = crate::exact::ratio_f64(&d);
        assert!((x - 0.125).abs() <= 0.25 * 0.125, "{x}");
        assert!(mono_density(
            &Coloring::new(Graph::complete(3)),
            &c4(),
            Variant::Injective
        )
        .is_err());
    }

    #[test]
    fn incremental_c4_matches_direct() {
        let g = generate(&GenSpec::gnp(8, "1/2".parse().unwrap(), 3)).unwrap();
        let mut s = C4State::new(&g);
        let mut h = g.clone();
        for (u, v) in [(0, 1), (2, 5), (0, 1), (3, 7), (4, 6)] {
            s.toggle(u, v);
            h.toggle_edge(u, v);
            assert_eq!(
                BigUint::from(s.sum as u64),
                injective_count(&crate::generators::cycle(4), &h)
            );
        }
    }

    #[test]
    fn exhaustive_c4_agrees_with_generic_path() {
        // the incremental C4 walk against a plain minimum over every colouring
        for n in 4..=5 {
            let rep = multiplicity_scan(&c4(), n, &ScanMode::Exhaustive).unwrap();
            let pairs = n * (n - 1) / 2;
            let mut best = None::<BigUint>;
            for code in 0..1u64 << pairs {
                let red = crate::enumerate::from_code(n, code);
                let m = injective_count(c4().graph(), &red)
                    + injective_count(c4().graph(), &red.complement());
                best = Some(best.map_or(m.clone(), |b| b.min(m)));
            }
            assert_eq!(rep.min_mono, best.unwrap(), "N = {n}");
            let red = Graph::from_edges(n, &rep.argmin_red_edges).unwrap();
            let direct = injective_count(c4().graph(), &red)
                + injective_count(c4().graph(), &red.complement());
            assert_eq!(direct, rep.min_mono);
        }
    }

    #[test]
    fn k2_and_p3_scans() {
        let k2 = pattern_shorthand("K2").unwrap();
        for n in 2..=5 {
            let rep = multiplicity_scan(&k2, n, &ScanMode::Exhaustive).unwrap();
            assert_eq!(rep.value.0, BigRational::one());
        }
        let p2 = pattern_shorthand("P_2").unwrap();
        let a = multiplicity_scan(&p2, 4, &ScanMode::Exhaustive).unwrap();
        let b = multiplicity_scan(&p2, 5, &ScanMode::Exhaustive).unwrap();
        assert!(a.value.0 <= b.value.0 && b.within_random_bound);
        assert_eq!(a.automorphisms, BigUint::from(2u32));
    }

    #[test]
    fn random_mode_is_an_upper_bound() {
        let exact = multiplicity_scan(&c4(), 6, &ScanMode::Exhaustive).unwrap();
        let rnd = multiplicity_scan(
            &c4(),
            6,
            &ScanMode::Random {
                samples: 200,
                seed: 4,
            },
        )
        .unwrap();
        assert!(rnd.upper_bound_only && rnd.value.0 >= exact.value.0);
        assert!(multiplicity_scan(&c4(), 8, &ScanMode::Exhaustive).is_err());
    }
}
