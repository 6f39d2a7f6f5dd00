//! Exact homomorphism counts and densities.
//!
//! Three independent engines produce `h_H(G)`: backtracking ([`hom_count_brute`]),
//! variable elimination over an optimal tree decomposition ([`hom_count_treedp`]),
//! and closed forms for paths, cycles and complete bipartite patterns
//! ([`hom_count_closed_form`]). [`Counter`] picks the cheapest applicable engine per
//! connected component and can cross-check all of them.

mod brute;
mod closed;
mod kernel;
mod treedp;

pub use brute::{hom_count_brute, injective_count, DEFAULT_BRUTE_CAP};
pub use closed::{
    biclique_count, biclique_count_sequences, count_shape, cycle_count, hom_count_closed_form,
    path_count, recognize, Shape, DEFAULT_SEQUENCE_CAP,
};
pub use kernel::{kernel_density, kernel_density_direct, Kernel, KernelFile};
pub use treedp::{
    count_with_decomposition, elimination_order, hom_count_treedp, hom_count_treedp_with,
    Decomposition, TreeDpOutcome, DEFAULT_MAX_WIDTH, DEFAULT_TABLE_BUDGET,
    MAX_DECOMPOSITION_VERTICES,
};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{falling_factorial, Density, HomCount};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    ClosedForm,
    TreeDp,
    Brute,
}

#[derive(Clone, Debug, Serialize)]
pub struct CountConfig {
    pub brute_cap: usize,
    pub max_width: usize,
    pub table_budget: u128,
    pub sequence_cap: usize,
    /// Run every applicable engine and fail on any disagreement.
    pub cross_check: bool,
}

impl Default for CountConfig {
    fn default() -> Self {
        CountConfig {
            brute_cap: DEFAULT_BRUTE_CAP,
            max_width: DEFAULT_MAX_WIDTH,
            table_budget: DEFAULT_TABLE_BUDGET,
            sequence_cap: DEFAULT_SEQUENCE_CAP,
            cross_check: false,
        }
    }
}

/// A count together with the engine used for each connected component of `H`.
#[derive(Clone, Debug, Serialize)]
pub struct CountOutcome {
    #[serde(serialize_with = "crate::exact::serialize_big")]
    pub count: HomCount,
    pub engines: Vec<Engine>,
    pub notices: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct Counter {
    pub config: CountConfig,
}

impl Counter {
    pub fn new(config: CountConfig) -> Self {
        Counter { config }
    }

    /// `h_H(G)`, factorized over the connected components of `H`.
    pub fn count(&self, h: &Graph, g: &Graph) -> Result<CountOutcome> {
        let mut total = BigUint::one();
        let mut engines = Vec::new();
        let mut notices = Vec::new();
        for comp in h.components() {
            let part = h.induced(&comp);
            let (c, e, note) = self.count_connected(&part, g)?;
            total *= c;
            engines.push(e);
            notices.extend(note);
            if total.is_zero() {
                break;
            }
        }
        Ok(CountOutcome {
            count: total,
            engines,
            notices,
        })
    }

    fn count_connected(&self, h: &Graph, g: &Graph) -> Result<(HomCount, Engine, Option<String>)> {
        let cfg = &self.config;
        let shapes = recognize(h);
        let mut results: Vec<(Engine, HomCount)> = Vec::new();
        let mut notice = None;

        for &shape in &shapes {
            match count_shape(shape, g, cfg.sequence_cap) {
                Ok(c) => {
                    results.push((Engine::ClosedForm, c));
                    if !cfg.cross_check {
                        break;
                    }
                }
                Err(Error::InvalidParameter(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        if results.is_empty() || cfg.cross_check {
            match elimination_order(h) {
                Ok(dec) if dec.width <= cfg.max_width => {
                    let c = count_with_decomposition(h, g, &dec, cfg.table_budget)?;
                    results.push((Engine::TreeDp, c));
                }
                Ok(dec) => {
                    notice = Some(format!(
                        "pattern treewidth {} exceeds the limit {}; counted by backtracking",
                        dec.width, cfg.max_width
                    ));
                }
                Err(e) => notice = Some(format!("{e}; counted by backtracking")),
            }
        }
        if results.is_empty() || (cfg.cross_check && h.n() <= cfg.brute_cap) {
            results.push((Engine::Brute, hom_count_brute(h, g, cfg.brute_cap)?));
        }
        let (engine, first) = results[0].clone();
        if let Some((other, c)) = results.iter().find(|(_, c)| *c != first) {
            return Err(Error::EngineDisagreement {
                pattern: format!("{h:?}"),
                detail: format!("{engine:?} gives {first}, {other:?} gives {c}"),
            });
        }
        Ok((first, engine, notice))
    }

    pub fn density(&self, h: &Graph, g: &Graph) -> Result<Density> {
        if g.n() == 0 {
            return Err(Error::EmptyGraph);
        }
        let c = self.count(h, g)?;
        Ok(Density::new(c.count, g.n() as u64, h.n() as u32))
    }
}

/// `h_H(G)` with the default engine choice.
pub fn hom_count(h: &Graph, g: &Graph) -> Result<HomCount> {
    Counter::default().count(h, g).map(|c| c.count)
}

/// `t_H(G) = h_H(G) / N^{|H|}` with the default engine choice.
pub fn density(h: &Graph, g: &Graph) -> Result<Density> {
    Counter::default().density(h, g)
}

/// Fraction of injective maps `V(H) -> V(G)` that preserve edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectiveDensity {
    pub count: HomCount,
    /// `N (N-1) ... (N-|H|+1)`.
    pub injections: BigUint,
    pub value: BigRational,
    pub notice: Option<String>,
}

pub fn injective_density(h: &Graph, g: &Graph) -> InjectiveDensity {
    let injections = falling_factorial(g.n() as u64, h.n() as u32);
    if injections.is_zero() {
        return InjectiveDensity {
            count: BigUint::zero(),
            injections,
            value: BigRational::zero(),
            notice: Some(format!(
                "host has {} vertices, fewer than the pattern's {}; density taken as 0",
                g.n(),
                h.n()
            )),
        };
    }
    let count = injective_count(h, g);
    let value = BigRational::new(
        BigInt::from(count.clone()),
        BigInt::from(injections.clone()),
    );
    InjectiveDensity {
        count,
        injections,
        value,
        notice: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio_of;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn path(k: usize) -> Graph {
        let edges: Vec<_> = (0..k).map(|i| (i, i + 1)).collect();
        Graph::from_edges(k + 1, &edges).unwrap()
    }

    #[test]
    fn density_examples() {
        let k2 = Graph::complete(2);
        assert_eq!(
            density(&k2, &Graph::complete(4)).unwrap().to_ratio(),
            ratio_of(3, 4)
        );
        assert_eq!(
            density(&cycle(4), &Graph::complete(3)).unwrap().to_ratio(),
            ratio_of(2, 9)
        );
        let star2 = path(2);
        let d = density(&path(3), &star2).unwrap();
        assert_eq!(d.to_ratio(), ratio_of(8, 81));
        assert_eq!(d.to_string(), "8/81");
    }

    #[test]
    fn empty_host_rejected() {
        assert_eq!(density(&path(1), &Graph::empty(0)), Err(Error::EmptyGraph));
    }

    #[test]
    fn cross_check_runs_every_engine() {
        let counter = Counter::new(CountConfig {
            cross_check: true,
            ..CountConfig::default()
        });
        let g = cycle(5).disjoint_union(&Graph::complete(4));
        for h in [cycle(4), path(3), cycle(6).disjoint_union(&path(2))] {
            let out = counter.count(&h, &g).unwrap();
            assert_eq!(out.count, hom_count_brute(&h, &g, 12).unwrap());
        }
    }

    #[test]
    fn injective_examples() {
        let k2 = Graph::complete(2);
        let k3 = Graph::complete(3);
        assert_eq!(injective_density(&k2, &k3).value, ratio_of(1, 1));
        assert_eq!(
            injective_density(&cycle(4), &cycle(4)).value,
            ratio_of(1, 3)
        );
        let none = injective_density(&cycle(4), &k3);
        assert!(none.value.is_zero());
        assert!(none.notice.is_some());
    }
}
