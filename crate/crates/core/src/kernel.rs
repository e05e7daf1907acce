//! The symmetric kernel `Ψ(p, q)` of order `j` over pairs of distributions.
//!
//! `Ψ(p, q)` sums, over ordered tuples `(a_1, ..., a_{j+1})` of pairwise
//! distinct symbols, the products `p_{a_1}...p_{a_j} q_{a_{j+1}}` and
//! `q_{a_1}...q_{a_j} p_{a_{j+1}}`. Grouping the tuple by its first `j`
//! entries gives
//!
//! ```text
//! Ψ(p, q) = j! Σ_{|A| = j} (p_A q(Aᶜ) + q_A p(Aᶜ))
//! ```
//!
//! where `p_A` is the product over the set `A` and `q(Aᶜ)` the mass outside
//! it. The set sums are accumulated coordinate by coordinate, which costs
//! `O(b j)` instead of `O(b^{j+1})`.

use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{params, Error, Result};
use crate::simplex::{Distribution, SUM_TOLERANCE};

/// Alphabet size `b` and tuple order `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KernelContext {
    pub b: usize,
    pub j: usize,
}

impl KernelContext {
    pub fn new(b: usize, j: usize) -> Result<Self> {
        if b < 2 {
            return Err(params(format!("alphabet size must be at least 2, got {b}")));
        }
        if j < 1 {
            return Err(params("kernel order j must be at least 1"));
        }
        Ok(Self { b, j })
    }

    /// No `j + 1` distinct symbols exist, so the kernel vanishes identically.
    pub fn is_degenerate(&self) -> bool {
        self.j + 1 > self.b
    }

    fn check(&self, p: &[f64], q: &[f64]) -> Result<()> {
        for v in [p, q] {
            if v.len() != self.b {
                return Err(Error::DimensionMismatch {
                    expected: self.b,
                    actual: v.len(),
                });
            }
        }
        Ok(())
    }
}

/// Arithmetic needed by the kernel recursion; implemented for `f64` and,
/// through the blanket impl, for exact rational types.
pub trait KernelScalar: Clone + Add<Output = Self> + Mul<Output = Self> {
    fn zero() -> Self;
    fn one() -> Self;
}

impl<T> KernelScalar for T
where
    T: Clone + Add<Output = T> + Mul<Output = T> + num_traits::Zero + num_traits::One,
{
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
}

fn factorial<T: KernelScalar>(n: usize) -> T {
    let mut acc = T::one();
    let mut k = T::one();
    for _ in 1..=n {
        acc = acc * k.clone();
        k = k + T::one();
    }
    acc
}

/// Subset sums over the coordinates seen so far:
/// `prod[t] = Σ_{|A|=t} x_A` and `cross[t] = Σ_{|A|=t} x_A y(Aᶜ)`.
#[derive(Clone, Debug)]
struct SubsetSums<T> {
    prod: Vec<T>,
    cross: Vec<T>,
}

impl<T: KernelScalar> SubsetSums<T> {
    fn empty(order: usize) -> Self {
        let mut prod = vec![T::zero(); order + 1];
        prod[0] = T::one();
        Self {
            prod,
            cross: vec![T::zero(); order + 1],
        }
    }

    fn push(&mut self, x: &T, y: &T) {
        for t in (0..self.prod.len()).rev() {
            // coordinate left out of A contributes its y-mass; taken into A it multiplies by x
            let mut c = self.cross[t].clone() + y.clone() * self.prod[t].clone();
            if t > 0 {
                c = c + x.clone() * self.cross[t - 1].clone();
                self.prod[t] = self.prod[t].clone() + x.clone() * self.prod[t - 1].clone();
            }
            self.cross[t] = c;
        }
    }

    fn over(x: &[T], y: &[T], order: usize) -> Self {
        let mut s = Self::empty(order);
        for (a, b) in x.iter().zip(y) {
            s.push(a, b);
        }
        s
    }

    /// Sums over the disjoint union of the two coordinate sets.
    fn join(&self, other: &Self) -> Self {
        let n = self.prod.len();
        let mut out = Self {
            prod: vec![T::zero(); n],
            cross: vec![T::zero(); n],
        };
        for m in 0..n {
            for a in 0..=m {
                let (ep, es) = (&self.prod[a], &other.prod[m - a]);
                out.prod[m] = out.prod[m].clone() + ep.clone() * es.clone();
                out.cross[m] = out.cross[m].clone()
                    + self.cross[a].clone() * es.clone()
                    + ep.clone() * other.cross[m - a].clone();
            }
        }
        out
    }
}

/// `Ψ(p, q)` over any exact or floating scalar; `p`, `q` are raw vectors of equal length.
pub fn psi_generic<T: KernelScalar>(j: usize, p: &[T], q: &[T]) -> T {
    let pq = SubsetSums::over(p, q, j);
    let qp = SubsetSums::over(q, p, j);
    factorial::<T>(j) * (pq.cross[j].clone() + qp.cross[j].clone())
}

/// `Ψ(p, q)` for distributions.
pub fn psi_eval(ctx: &KernelContext, p: &Distribution, q: &Distribution) -> Result<f64> {
    psi_slices(ctx, p.probs(), q.probs())
}

/// `Ψ` on raw slices (dimension-checked).
pub fn psi_slices(ctx: &KernelContext, p: &[f64], q: &[f64]) -> Result<f64> {
    ctx.check(p, q)?;
    Ok(psi_unchecked(ctx.j, p, q))
}

#[inline]
pub(crate) fn psi_unchecked(j: usize, p: &[f64], q: &[f64]) -> f64 {
    psi_generic(j, p, q)
}

/// Largest tuple count the reference summation will walk.
pub const NAIVE_GUARD: f64 = 1e8;

/// Reference evaluation by direct summation over ordered distinct tuples.
pub fn psi_eval_naive(ctx: &KernelContext, p: &Distribution, q: &Distribution) -> Result<f64> {
    let (p, q) = (p.probs(), q.probs());
    ctx.check(p, q)?;
    let work = (ctx.b as f64).powi(ctx.j as i32 + 1);
    if work > NAIVE_GUARD {
        return Err(Error::ResourceGuard(format!(
            "b^(j+1) = {work:e} exceeds {NAIVE_GUARD:e}"
        )));
    }
    fn walk(
        depth: usize,
        j: usize,
        used: &mut Vec<bool>,
        prod_p: f64,
        prod_q: f64,
        p: &[f64],
        q: &[f64],
    ) -> f64 {
        if depth == j {
            return (0..p.len())
                .filter(|&c| !used[c])
                .map(|c| prod_p * q[c] + prod_q * p[c])
                .sum();
        }
        let mut total = 0.0;
        for a in 0..p.len() {
            if used[a] {
                continue;
            }
            used[a] = true;
            total += walk(depth + 1, j, used, prod_p * p[a], prod_q * q[a], p, q);
            used[a] = false;
        }
        total
    }
    let mut used = vec![false; ctx.b];
    Ok(walk(0, ctx.j, &mut used, 1.0, 1.0, p, q))
}

/// Partial derivatives of `Ψ` with respect to every entry of `p` and of `q`.
pub fn psi_gradient(
    ctx: &KernelContext,
    p: &Distribution,
    q: &Distribution,
) -> Result<(Vec<f64>, Vec<f64>)> {
    ctx.check(p.probs(), q.probs())?;
    Ok(gradient_unchecked(ctx.j, p.probs(), q.probs()))
}

/// Gradient on raw slices, used by the ascent loop.
pub(crate) fn gradient_unchecked(j: usize, p: &[f64], q: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let fact: f64 = factorial(j);
    let pq = leave_one_out(p, q, j);
    let qp = leave_one_out(q, p, j);
    // dΨ/dp_c = j! [ cross_{j-1}(p,q without c) + prod_j(q without c) ]
    let gp = (0..p.len())
        .map(|c| fact * (pq[c].cross[j - 1] + qp[c].prod[j]))
        .collect();
    let gq = (0..p.len())
        .map(|c| fact * (qp[c].cross[j - 1] + pq[c].prod[j]))
        .collect();
    (gp, gq)
}

fn leave_one_out(x: &[f64], y: &[f64], order: usize) -> Vec<SubsetSums<f64>> {
    let b = x.len();
    let mut prefix = Vec::with_capacity(b + 1);
    prefix.push(SubsetSums::empty(order));
    for c in 0..b {
        let mut next = prefix[c].clone();
        next.push(&x[c], &y[c]);
        prefix.push(next);
    }
    let mut suffix = vec![SubsetSums::empty(order); b + 1];
    for c in (0..b).rev() {
        let mut next = suffix[c + 1].clone();
        next.push(&x[c], &y[c]);
        suffix[c] = next;
    }
    (0..b).map(|c| prefix[c].join(&suffix[c + 1])).collect()
}

/// A finite probability distribution over simplex points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedEnsemble {
    weights: Vec<f64>,
    points: Vec<Distribution>,
}

impl WeightedEnsemble {
    pub fn new(weights: Vec<f64>, points: Vec<Distribution>) -> Result<Self> {
        if weights.len() != points.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                actual: weights.len(),
            });
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(params("ensemble weights must be finite and non-negative"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(params(format!("ensemble weights sum to {total}, not 1")));
        }
        Ok(Self { weights, points })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn points(&self) -> &[Distribution] {
        &self.points
    }
}

/// The double sum `Σ_{p,q} λ_p λ_q Ψ(p, q)`.
pub fn quadratic_form(ctx: &KernelContext, ensemble: &WeightedEnsemble) -> Result<f64> {
    let mut total = 0.0;
    for (wp, p) in ensemble.weights.iter().zip(&ensemble.points) {
        for (wq, q) in ensemble.weights.iter().zip(&ensemble.points) {
            total += wp * wq * psi_eval(ctx, p, q)?;
        }
    }
    Ok(total)
}

/// `Ψ(u, u) = 2 b(b-1)...(b-j) / b^{j+1}` at the uniform distribution.
pub fn psi_uniform(ctx: &KernelContext) -> f64 {
    if ctx.is_degenerate() {
        return 0.0;
    }
    let b = ctx.b as f64;
    (0..=ctx.j).map(|i| (ctx.b - i) as f64 / b).product::<f64>() * 2.0
}
