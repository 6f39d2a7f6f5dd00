//! Finite step kernels: a symmetric nonnegative weight matrix over `q` blocks with a
//! probability measure on the blocks. Densities are exact rationals.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{parse_ratio, ratio_string};
use crate::graph::Graph;

use super::brute::SearchOrder;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    weights: Vec<Vec<BigRational>>,
    measure: Vec<BigRational>,
}

impl Kernel {
    pub fn new(weights: Vec<Vec<BigRational>>, measure: Vec<BigRational>) -> Result<Self> {
        let q = measure.len();
        if q == 0 {
            return Err(Error::InvalidKernel(
                "kernel needs at least one block".into(),
            ));
        }
        if weights.len() != q || weights.iter().any(|row| row.len() != q) {
            return Err(Error::InvalidKernel(format!("weights must be {q}x{q}")));
        }
        for i in 0..q {
            for j in 0..q {
                if weights[i][j].is_negative() {
                    return Err(Error::InvalidKernel(format!(
                        "negative weight at ({i}, {j})"
                    )));
                }
                if weights[i][j] != weights[j][i] {
                    return Err(Error::InvalidKernel(format!(
                        "asymmetric weights at ({i}, {j}): {} vs {}",
                        ratio_string(&weights[i][j]),
                        ratio_string(&weights[j][i])
                    )));
                }
            }
        }
        if let Some(i) = measure.iter().position(|m| m.is_negative()) {
            return Err(Error::InvalidKernel(format!(
                "negative measure on block {i}"
            )));
        }
        let mass: BigRational = measure.iter().cloned().sum();
        if !mass.is_one() {
            return Err(Error::InvalidKernel(format!(
                "measure sums to {}, not 1",
                ratio_string(&mass)
            )));
        }
        Ok(Kernel { weights, measure })
    }

    /// Constant kernel `h ≡ p` on one block.
    pub fn constant(p: BigRational) -> Result<Self> {
        Kernel::new(vec![vec![p]], vec![BigRational::one()])
    }

    /// Adjacency matrix of `g` with the uniform measure `1/N`.
    pub fn from_graph(g: &Graph) -> Result<Self> {
        let n = g.n();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let weights = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if g.has_edge(i, j) {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let mu = BigRational::new(BigInt::one(), BigInt::from(n));
        Kernel::new(weights, vec![mu; n])
    }

    pub fn size(&self) -> usize {
        self.measure.len()
    }

    pub fn weight(&self, i: usize, j: usize) -> &BigRational {
        &self.weights[i][j]
    }

    pub fn weights(&self) -> &[Vec<BigRational>] {
        &self.weights
    }

    pub fn measure(&self) -> &[BigRational] {
        &self.measure
    }

    /// Integer rescaling: weights times `wd`, measures times `md`.
    fn scaled(&self) -> (Vec<Vec<BigUint>>, BigUint, Vec<BigUint>, BigUint) {
        let lcm = |it: &mut dyn Iterator<Item = &BigRational>| {
            it.fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
        };
        let wd = lcm(&mut self.weights.iter().flatten());
        let md = lcm(&mut self.measure.iter());
        let to_int = |r: &BigRational, d: &BigInt| -> BigUint {
            (r.numer() * (d / r.denom()))
                .to_biguint()
                .expect("nonnegative")
        };
        let w = self
            .weights
            .iter()
            .map(|row| row.iter().map(|r| to_int(r, &wd)).collect())
            .collect();
        let m = self.measure.iter().map(|r| to_int(r, &md)).collect();
        (w, wd.to_biguint().unwrap(), m, md.to_biguint().unwrap())
    }
}

/// `∫ Π_{(i,j) ∈ E(H)} h(x_i, x_j) dμ^{|H|}` for a step kernel: the sum over block
/// assignments of the product of edge weights and vertex masses.
///
/// Computed on integer-rescaled weights by backtracking with zero pruning.
pub fn kernel_density(h: &Graph, w: &Kernel) -> BigRational {
    let k = h.n();
    if k == 0 {
        return BigRational::one();
    }
    let q = w.size();
    let (wi, wd, mi, md) = w.scaled();
    let search = SearchOrder::new(h);
    let total = (0..q)
        .into_par_iter()
        .map(|x| {
            if mi[x].is_zero() {
                return BigUint::zero();
            }
            let mut blocks = vec![0usize; k];
            blocks[0] = x;
            let mut acc = BigUint::zero();
            kernel_extend(&search, &wi, &mi, 1, &mut blocks, mi[x].clone(), &mut acc);
            acc
        })
        .reduce(BigUint::zero, |a, b| a + b);
    let denom = wd.pow(h.edge_count() as u32) * md.pow(k as u32);
    BigRational::new(BigInt::from(total), BigInt::from(denom))
}

fn kernel_extend(
    search: &SearchOrder,
    w: &[Vec<BigUint>],
    m: &[BigUint],
    depth: usize,
    blocks: &mut [usize],
    partial: BigUint,
    acc: &mut BigUint,
) {
    if depth == search.order.len() {
        *acc += partial;
        return;
    }
    for b in 0..m.len() {
        if m[b].is_zero() {
            continue;
        }
        let mut p = &partial * &m[b];
        for &prev in &search.back[depth] {
            let wt = &w[blocks[prev]][b];
            if wt.is_zero() {
                p = BigUint::zero();
                break;
            }
            p *= wt;
        }
        if p.is_zero() {
            continue;
        }
        blocks[depth] = b;
        kernel_extend(search, w, m, depth + 1, blocks, p, acc);
    }
}

/// Reference evaluation directly in rationals over all `q^{|H|}` assignments.
/// Independent of [`kernel_density`]; used to re-check search results.
pub fn kernel_density_direct(h: &Graph, w: &Kernel) -> BigRational {
    let k = h.n();
    let q = w.size();
    let edges = h.edges();
    let mut total = BigRational::zero();
    let mut f = vec![0usize; k];
    loop {
        let mut term: BigRational = f.iter().map(|&b| w.measure[b].clone()).product();
        for &(a, b) in &edges {
            term *= &w.weights[f[a]][f[b]];
        }
        total += term;
        let mut i = 0;
        loop {
            if i == k {
                return total;
            }
            f[i] += 1;
            if f[i] < q {
                break;
            }
            f[i] = 0;
            i += 1;
        }
    }
}

/// On-disk form: rationals as `"a/b"` strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KernelFile {
    pub weights: Vec<Vec<String>>,
    pub measure: Vec<String>,
}

impl KernelFile {
    pub fn into_kernel(self) -> Result<Kernel> {
        let parse = |s: &String| {
            parse_ratio(s)
                .ok_or_else(|| Error::InvalidKernel(format!("cannot parse rational {s:?}")))
        };
        let weights = self
            .weights
            .iter()
            .map(|row| row.iter().map(parse).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let measure = self.measure.iter().map(parse).collect::<Result<Vec<_>>>()?;
        Kernel::new(weights, measure)
    }

    pub fn from_kernel(k: &Kernel) -> Self {
        KernelFile {
            weights: k
                .weights
                .iter()
                .map(|row| row.iter().map(ratio_string).collect())
                .collect(),
            measure: k.measure.iter().map(ratio_string).collect(),
        }
    }
}
