//! Maximization of `Ψ(p, q)` with `p` and `q` confined to simplex regions.
//!
//! [`maximize_pair`] takes the best of two searches:
//!
//! * a structured candidate list: affine one-parameter families of point
//!   pairs (uniform, vertices against uniform complements, two-level points
//!   pinned at the threshold, ...), each maximized over its exact feasible
//!   parameter interval by a coarse scan followed by golden-section search;
//! * multistart projected gradient ascent with backtracking; both blocks
//!   take one shared step and are projected onto their regions.
//!
//! [`oracle_scan`] is an independent brute-force lower bound built from
//! lattice points and region samples.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{gradient_unchecked, psi_unchecked, KernelContext};
use crate::simplex::{grid_count, grid_enumerate, Distribution, PartitionKind, Region, RegionSpec};

/// Slack allowed when checking that a witness lies in its region.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-10;

/// Knobs for [`maximize_pair`] and [`oracle_scan`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    /// First trial step of every backtracking line search (along the unit gradient).
    pub initial_step: f64,
    /// Factor applied to the trial step after each rejected trial.
    pub step_decay: f64,
    /// Line search gives up below this step.
    pub min_step: f64,
    /// Relative objective change below which a trajectory counts as converged.
    pub tolerance: f64,
    pub seed: u64,
    /// Lattice denominator used by [`oracle_scan`].
    pub oracle_denominator: usize,
    /// Random region samples drawn by [`oracle_scan`] outside exhaustive mode.
    pub oracle_samples: usize,
    /// Coarse scan resolution for each candidate family.
    pub family_scan: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 256,
            max_iterations: 2000,
            initial_step: 0.5,
            step_decay: 0.5,
            min_step: 1e-15,
            tolerance: 1e-10,
            seed: 0x5eed,
            oracle_denominator: 12,
            oracle_samples: 10_000,
            family_scan: 32,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            self.restarts,
            self.max_iterations,
            self.oracle_denominator,
            self.oracle_samples,
            self.family_scan,
        ];
        if counts.contains(&0) {
            return Err(crate::error::params("search counts must be positive"));
        }
        if !(self.tolerance > 0.0
            && self.initial_step > 0.0
            && self.min_step > 0.0
            && self.step_decay > 0.0
            && self.step_decay < 1.0)
        {
            return Err(crate::error::params(
                "tolerance, steps must be positive and step_decay in (0,1)",
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum WitnessMethod {
    CandidatePoint,
    ProjectedAscent,
    GridOracle,
}

/// The best pair found and how it was found.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimumWitness {
    pub value: f64,
    pub p: Distribution,
    pub q: Distribution,
    pub method: WitnessMethod,
    pub converged: bool,
}

impl OptimumWitness {
    fn from_raw(j: usize, p: &[f64], q: &[f64], method: WitnessMethod, converged: bool) -> Self {
        let b = p.len();
        let p = Distribution::new(p, b).expect("search points stay on the simplex");
        let q = Distribution::new(q, b).expect("search points stay on the simplex");
        let value = psi_unchecked(j, p.probs(), q.probs());
        Self {
            value,
            p,
            q,
            method,
            converged,
        }
    }

    /// Larger value first; ties go to the lexicographically smallest `(p, q)`.
    fn ranks_before(&self, other: &Self) -> bool {
        match self.value.total_cmp(&other.value) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => {
                let lex = lex_cmp(self.p.probs(), other.p.probs())
                    .then_with(|| lex_cmp(self.q.probs(), other.q.probs()))
                    .then_with(|| self.method.cmp(&other.method));
                lex != Ordering::Greater
            }
        }
    }

    pub fn is_feasible(&self, rp: &Region, rq: &Region) -> bool {
        rp.contains(self.p.probs(), FEASIBILITY_TOLERANCE)
            && rq.contains(self.q.probs(), FEASIBILITY_TOLERANCE)
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}

fn best_of(a: OptimumWitness, b: OptimumWitness) -> OptimumWitness {
    if a.ranks_before(&b) {
        a
    } else {
        b
    }
}

impl From<RegionSpec> for Region {
    fn from(spec: RegionSpec) -> Self {
        Region::Cell(spec.closed())
    }
}

fn check_regions(ctx: &KernelContext, rp: &Region, rq: &Region) -> Result<()> {
    for r in [rp, rq] {
        if r.dim() != ctx.b {
            return Err(Error::DimensionMismatch {
                expected: ctx.b,
                actual: r.dim(),
            });
        }
        if r.project_raw(&vec![1.0 / ctx.b as f64; ctx.b]).is_none() {
            return Err(Error::InfeasibleRegion(format!("{r:?} is empty")));
        }
    }
    Ok(())
}

/// Maximizes `Ψ(p, q)` over `p ∈ rp`, `q ∈ rq` (region closures).
///
/// Deterministic for a fixed configuration; restarts run in parallel and are
/// reduced with a total order, so thread count does not change the result.
pub fn maximize_pair(
    ctx: &KernelContext,
    rp: &Region,
    rq: &Region,
    cfg: &SearchConfig,
) -> Result<OptimumWitness> {
    cfg.validate()?;
    check_regions(ctx, rp, rq)?;
    let b = ctx.b;
    if ctx.is_degenerate() {
        let u = vec![1.0 / b as f64; b];
        let p = rp.project_raw(&u).expect("checked");
        let q = rq.project_raw(&u).expect("checked");
        return Ok(OptimumWitness::from_raw(ctx.j, &p, &q, WitnessMethod::CandidatePoint, true));
    }

    let candidate = best_candidate(ctx, rp, rq, cfg);

    let ascent = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = restart_rng(cfg.seed, r as u64);
            let p0 = random_point(b, &mut rng);
            let q0 = random_point(b, &mut rng);
            ascend(ctx.j, rp, rq, &p0, &q0, cfg, None)
        })
        .reduce_with(best_of);

    let mut best = match (candidate, ascent) {
        (Some(c), Some(a)) => best_of(c, a),
        (Some(c), None) => c,
        (None, Some(a)) => a,
        (None, None) => unreachable!("at least one restart"),
    };
    if best.method == WitnessMethod::CandidatePoint {
        // polish the structured optimum; only strict gains replace it
        let polished = ascend(ctx.j, rp, rq, best.p.probs(), best.q.probs(), cfg, None);
        if polished.value > best.value {
            best = polished;
        }
    }
    Ok(best)
}

/// Global maximum of `Ψ` over the whole simplex.
pub fn psi_max_global(ctx: &KernelContext, cfg: &SearchConfig) -> Result<OptimumWitness> {
    let whole = Region::Simplex { b: ctx.b };
    maximize_pair(ctx, &whole, &whole, cfg)
}

fn restart_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A random start: dense, sparse-support, or near-uniform.
fn random_point(b: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut x = vec![0.0; b];
    match rng.gen_range(0..3) {
        0 => {
            let shape = rng.gen_range(0.2..2.0);
            for v in &mut x {
                *v = gamma_sample(shape, rng);
            }
        }
        1 => {
            let support = rng.gen_range(1..=b);
            let mut idx: Vec<usize> = (0..b).collect();
            for i in 0..support {
                let k = rng.gen_range(i..b);
                idx.swap(i, k);
                x[idx[i]] = gamma_sample(1.0, rng);
            }
        }
        _ => {
            for v in &mut x {
                *v = 1.0 + 0.05 * (rng.gen::<f64>() - 0.5);
            }
        }
    }
    let total: f64 = x.iter().sum();
    if total > 0.0 {
        x.iter_mut().for_each(|v| *v /= total);
    } else {
        x = vec![1.0 / b as f64; b];
    }
    x
}

/// Marsaglia–Tsang gamma sampler (with the `shape < 1` boost).
fn gamma_sample(shape: f64, rng: &mut ChaCha8Rng) -> f64 {
    if shape < 1.0 {
        let u: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
        return gamma_sample(shape + 1.0, rng) * u.powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        // Box–Muller normal
        let (u1, u2): (f64, f64) = (rng.gen::<f64>().max(f64::MIN_POSITIVE), rng.gen());
        let z = (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
        let v = (1.0 + c * z).powi(3);
        if v <= 0.0 {
            continue;
        }
        let u: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
        if u.ln() < 0.5 * z * z + d - d * v + d * v.ln() {
            return d * v;
        }
    }
}

/// Projected gradient ascent from `(p0, q0)`; both blocks move with one
/// shared step along the normalized gradient and are projected back.
///
/// When `trace` is given, every accepted objective value is appended.
pub(crate) fn ascend(
    j: usize,
    rp: &Region,
    rq: &Region,
    p0: &[f64],
    q0: &[f64],
    cfg: &SearchConfig,
    mut trace: Option<&mut Vec<f64>>,
) -> OptimumWitness {
    let b = p0.len();
    let mut p = rp.project_raw(p0).expect("non-empty region");
    let mut q = rq.project_raw(q0).expect("non-empty region");
    let mut value = psi_unchecked(j, &p, &q);
    if let Some(t) = trace.as_deref_mut() {
        t.push(value);
    }
    let mut converged = false;
    let mut step = cfg.initial_step;
    let mut trial_p = vec![0.0; b];
    let mut trial_q = vec![0.0; b];
    for _ in 0..cfg.max_iterations {
        let (gp, gq) = gradient_unchecked(j, &p, &q);
        let norm = gp.iter().chain(&gq).map(|g| g * g).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            converged = true;
            break;
        }
        // restart each search at twice the last accepted step, capped at the initial step
        let mut s = (2.0 * step).min(cfg.initial_step);
        let mut accepted = None;
        while s >= cfg.min_step {
            for i in 0..b {
                trial_p[i] = p[i] + s * gp[i] / norm;
                trial_q[i] = q[i] + s * gq[i] / norm;
            }
            let np = rp.project_raw(&trial_p).expect("non-empty region");
            let nq = rq.project_raw(&trial_q).expect("non-empty region");
            let nv = psi_unchecked(j, &np, &nq);
            if nv > value {
                accepted = Some((np, nq, nv));
                break;
            }
            s *= cfg.step_decay;
        }
        match accepted {
            Some((np, nq, nv)) => {
                let gain = nv - value;
                p = np;
                q = nq;
                value = nv;
                step = s;
                if let Some(t) = trace.as_deref_mut() {
                    t.push(value);
                }
                if gain <= cfg.tolerance * value.abs().max(f64::MIN_POSITIVE) {
                    converged = true;
                    break;
                }
            }
            None => {
                converged = true;
                break;
            }
        }
    }
    OptimumWitness::from_raw(j, &p, &q, WitnessMethod::ProjectedAscent, converged)
}

/// Objective values along one ascent trajectory from `(p0, q0)`.
pub fn ascent_trajectory(
    ctx: &KernelContext,
    rp: &Region,
    rq: &Region,
    p0: &Distribution,
    q0: &Distribution,
    cfg: &SearchConfig,
) -> Result<(OptimumWitness, Vec<f64>)> {
    check_regions(ctx, rp, rq)?;
    let mut trace = Vec::new();
    let w = ascend(ctx.j, rp, rq, p0.probs(), q0.probs(), cfg, Some(&mut trace));
    Ok((w, trace))
}

/// A segment `t ↦ (p0 + t (p1 - p0), q0 + t (q1 - q0))`, `t ∈ [0, 1]`.
#[derive(Clone, Debug)]
struct Family {
    p0: Vec<f64>,
    p1: Vec<f64>,
    q0: Vec<f64>,
    q1: Vec<f64>,
}

impl Family {
    fn fixed(p: Vec<f64>, q: Vec<f64>) -> Self {
        Self {
            p1: p.clone(),
            p0: p,
            q1: q.clone(),
            q0: q,
        }
    }

    fn swapped(&self) -> Self {
        Self {
            p0: self.q0.clone(),
            p1: self.q1.clone(),
            q0: self.p0.clone(),
            q1: self.p1.clone(),
        }
    }

    fn at(&self, t: f64) -> (Vec<f64>, Vec<f64>) {
        let lerp = |a: &[f64], b: &[f64]| -> Vec<f64> {
            a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
        };
        (lerp(&self.p0, &self.p1), lerp(&self.q0, &self.q1))
    }

    /// The exact parameter interval on which both endpoints-interpolants are feasible.
    fn feasible_interval(&self, rp: &Region, rq: &Region) -> Option<(f64, f64)> {
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for (region, x0, x1) in [(rp, &self.p0, &self.p1), (rq, &self.q0, &self.q1)] {
            for c in region.constraints() {
                let s0 = c.slack(x0);
                let s1 = c.slack(x1);
                let slope = s1 - s0;
                // need s0 + t * slope >= -tol
                let tol = 1e-13;
                if slope.abs() < 1e-300 {
                    if s0 < -tol {
                        return None;
                    }
                } else if slope > 0.0 {
                    lo = lo.max((-tol - s0) / slope);
                } else {
                    hi = hi.min((-tol - s0) / slope);
                }
            }
        }
        (lo <= hi).then_some((lo.max(0.0), hi.min(1.0)))
    }
}

/// A point with `value` on each listed coordinate and the rest of the mass spread evenly.
fn levels(b: usize, fixed: &[(usize, f64)]) -> Option<Vec<f64>> {
    let mut x = vec![f64::NAN; b];
    let mut used = 0.0;
    for &(i, v) in fixed {
        if !x[i].is_nan() {
            return None;
        }
        x[i] = v;
        used += v;
    }
    let free = x.iter().filter(|v| v.is_nan()).count();
    let rest = 1.0 - used;
    if rest < -1e-15 || (free == 0 && rest.abs() > 1e-12) {
        return None;
    }
    let share = if free > 0 { rest.max(0.0) / free as f64 } else { 0.0 };
    for v in &mut x {
        if v.is_nan() {
            *v = share;
        }
    }
    Some(x)
}

/// The threshold attached to a region, if any.
fn region_epsilon(r: &Region) -> Option<f64> {
    match r {
        Region::Simplex { .. } => None,
        Region::Cell(spec) => Some(spec.epsilon),
        Region::CoordinateCap { cap, .. } => Some(*cap),
    }
}

fn structured_families(b: usize, eps_values: &[f64]) -> Vec<Family> {
    let mut out = Vec::new();
    let u = vec![1.0 / b as f64; b];
    out.push(Family::fixed(u.clone(), u.clone()));

    for a in 0..b {
        let e_a = levels(b, &[(a, 1.0)]).expect("vertex");
        let off_a = levels(b, &[(a, 0.0)]).expect("uniform complement");
        out.push(Family::fixed(e_a.clone(), off_a.clone()));
        out.push(Family::fixed(e_a.clone(), u.clone()));
        out.push(Family::fixed(off_a.clone(), u.clone()));

        // uniform on a run of s symbols against uniform on a run of t symbols
        for s in 1..=b {
            for t in 1..=b {
                for overlap in 0..=s.min(t) {
                    if s + t - overlap > b {
                        continue;
                    }
                    let mut p = vec![0.0; b];
                    let mut q = vec![0.0; b];
                    for i in 0..s {
                        p[(a + i) % b] = 1.0 / s as f64;
                    }
                    for i in 0..t {
                        q[(a + s - overlap + i) % b] = 1.0 / t as f64;
                    }
                    out.push(Family::fixed(p, q));
                }
            }
        }

        for c in 0..b {
            // zero at a against a two-level point peaked at c (free level δ)
            let peak0 = levels(b, &[(c, 1.0)]).expect("vertex");
            let flat = u.clone();
            out.push(Family {
                p0: off_a.clone(),
                p1: off_a.clone(),
                q0: peak0.clone(),
                q1: flat.clone(),
            });
            if a != c {
                let off_ac = levels(b, &[(a, 0.0), (c, 0.0)]).expect("two zeros");
                out.push(Family::fixed(e_a.clone(), levels(b, &[(a, 0.0), (c, 0.0)]).unwrap()));
                out.push(Family::fixed(off_ac, levels(b, &[(a, 1.0)]).unwrap()));
            }

            for &eps in eps_values {
                let heavy_a = levels(b, &[(a, 1.0 - eps)]).expect("heavy");
                let heavy_c = levels(b, &[(c, 1.0 - eps)]).expect("heavy");
                out.push(Family::fixed(heavy_a.clone(), heavy_c.clone()));
                out.push(Family::fixed(heavy_a.clone(), u.clone()));
                out.push(Family::fixed(heavy_a.clone(), off_a.clone()));
                let low_a = levels(b, &[(a, eps)]).expect("low");
                // eps at a against a two-level point peaked at c
                out.push(Family {
                    p0: low_a.clone(),
                    p1: low_a.clone(),
                    q0: peak0.clone(),
                    q1: flat.clone(),
                });
                out.push(Family::fixed(low_a.clone(), u.clone()));
                out.push(Family::fixed(low_a.clone(), low_a.clone()));
                if a != c {
                    if let (Some(p), Some(q)) = (
                        levels(b, &[(a, 1.0 - eps), (c, 0.0)]),
                        levels(b, &[(a, 0.0), (c, 1.0 - eps)]),
                    ) {
                        out.push(Family::fixed(p, q));
                    }
                    if let Some(p) = levels(b, &[(a, eps), (c, 0.0)]) {
                        // eps at a, zero at c against eps at a, free level at c
                        if let (Some(q0), Some(q1)) = (
                            levels(b, &[(a, eps), (c, 0.0)]),
                            levels(b, &[(a, eps), (c, 1.0 - eps)]),
                        ) {
                            out.push(Family {
                                p0: p.clone(),
                                p1: p.clone(),
                                q0,
                                q1,
                            });
                        }
                        out.push(Family::fixed(p.clone(), levels(b, &[(c, 1.0)]).unwrap()));
                    }
                    let low_c = levels(b, &[(c, eps)]).expect("low");
                    out.push(Family::fixed(low_a.clone(), low_c));
                }
            }
        }
    }
    let swapped: Vec<Family> = out.iter().map(Family::swapped).collect();
    out.extend(swapped);
    out
}

fn golden_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-13 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    let mut best = (x1, f1);
    for t in [lo, hi, x2] {
        let v = f(t);
        if v > best.1 {
            best = (t, v);
        }
    }
    best
}

/// Best structured candidate, or `None` when no family meets both regions.
fn best_candidate(
    ctx: &KernelContext,
    rp: &Region,
    rq: &Region,
    cfg: &SearchConfig,
) -> Option<OptimumWitness> {
    let b = ctx.b;
    let mut eps_values: Vec<f64> = [region_epsilon(rp), region_epsilon(rq)]
        .into_iter()
        .flatten()
        .collect();
    eps_values.dedup();
    let families = structured_families(b, &eps_values);
    families
        .par_iter()
        .filter_map(|fam| {
            let (lo, hi) = fam.feasible_interval(rp, rq)?;
            let objective = |t: f64| {
                let (p, q) = fam.at(t);
                psi_unchecked(ctx.j, &p, &q)
            };
            let (t, _) = if hi - lo < 1e-15 {
                (lo, objective(lo))
            } else {
                let n = cfg.family_scan;
                let grid: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
                let (idx, _) = grid
                    .iter()
                    .map(|&t| objective(t))
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
                let a = grid[idx.saturating_sub(1)];
                let z = grid[(idx + 1).min(n)];
                golden_max(&objective, a, z)
            };
            let (p, q) = fam.at(t);
            let w = OptimumWitness::from_raw(ctx.j, &p, &q, WitnessMethod::CandidatePoint, true);
            w.is_feasible(rp, rq).then_some(w)
        })
        .reduce_with(best_of)
}

/// Largest number of `(p, q)` pairs [`oracle_scan`] will evaluate.
pub const ORACLE_PAIR_GUARD: u128 = 60_000_000;

/// Brute-force lower bound on the supremum of `Ψ` over `rp × rq`.
///
/// With `b <= 5` and `D <= 16` every pair of lattice points (denominator
/// `D`) in the two regions is evaluated. Otherwise lattice points of each
/// region are paired with a fixed list of structured points and random
/// samples of the other region.
pub fn oracle_scan(
    ctx: &KernelContext,
    rp: &Region,
    rq: &Region,
    cfg: &SearchConfig,
) -> Result<OptimumWitness> {
    cfg.validate()?;
    check_regions(ctx, rp, rq)?;
    let b = ctx.b;
    let d = cfg.oracle_denominator;
    let exhaustive = b <= 5 && d <= 16;
    if exhaustive {
        let n = grid_count(b, d);
        if n.saturating_mul(n) > ORACLE_PAIR_GUARD {
            return Err(Error::ResourceGuard(format!(
                "{n}^2 lattice pairs exceed {ORACLE_PAIR_GUARD}"
            )));
        }
    }

    let lattice = |r: &Region| -> Vec<Vec<f64>> {
        grid_enumerate(b, d)
            .map(Distribution::into_vec)
            .filter(|x| r.contains(x, 1e-12))
            .collect()
    };
    let mut gp = lattice(rp);
    let mut gq = lattice(rq);

    if exhaustive {
        if gp.is_empty() {
            gp.push(rp.project_raw(&vec![1.0 / b as f64; b]).expect("checked"));
        }
        if gq.is_empty() {
            gq.push(rq.project_raw(&vec![1.0 / b as f64; b]).expect("checked"));
        }
        return Ok(scan_pairs(ctx.j, &gp, &gq));
    }

    let mut rng = restart_rng(cfg.seed ^ 0x0ac1e, 0);
    let mut extra_p = region_samples(rp, cfg.oracle_samples / 2, &mut rng);
    let mut extra_q = region_samples(rq, cfg.oracle_samples / 2, &mut rng);
    extra_p.extend(anchor_points(rp));
    extra_q.extend(anchor_points(rq));
    let work = (gp.len() * extra_q.len() + extra_p.len() * gq.len()) as u128;
    if work > ORACLE_PAIR_GUARD {
        return Err(Error::ResourceGuard(format!(
            "{work} lattice-sample pairs exceed {ORACLE_PAIR_GUARD}; lower the denominator or samples"
        )));
    }
    // lattice of each side against samples and anchors of the other, plus anchors against anchors
    let mut best = scan_pairs(ctx.j, &extra_p, &extra_q);
    for (ps, qs) in [(&gp, &extra_q), (&extra_p, &gq)] {
        if !ps.is_empty() && !qs.is_empty() {
            best = best_of(best, scan_pairs(ctx.j, ps, qs));
        }
    }
    Ok(best)
}

fn scan_pairs(j: usize, ps: &[Vec<f64>], qs: &[Vec<f64>]) -> OptimumWitness {
    let (vi, vj, _) = ps
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let mut best = (i, 0usize, f64::NEG_INFINITY);
            for (k, q) in qs.iter().enumerate() {
                let v = psi_unchecked(j, p, q);
                if v > best.2 {
                    best = (i, k, v);
                }
            }
            best
        })
        .reduce(
            || (0, 0, f64::NEG_INFINITY),
            |a, b| match a.2.total_cmp(&b.2) {
                Ordering::Less => b,
                Ordering::Greater => a,
                Ordering::Equal => {
                    if (b.0, b.1) < (a.0, a.1) {
                        b
                    } else {
                        a
                    }
                }
            },
        );
    OptimumWitness::from_raw(j, &ps[vi], &qs[vj], WitnessMethod::GridOracle, true)
}

/// Uniform, vertices and uniform-on-complement points that lie in the region
/// (projected when they do not).
fn anchor_points(r: &Region) -> Vec<Vec<f64>> {
    let b = r.dim();
    let mut pts = vec![vec![1.0 / b as f64; b]];
    for a in 0..b {
        pts.push(levels(b, &[(a, 1.0)]).expect("vertex"));
        pts.push(levels(b, &[(a, 0.0)]).expect("complement"));
    }
    pts.into_iter()
        .map(|x| {
            if r.contains(&x, 1e-12) {
                x
            } else {
                r.project_raw(&x).expect("checked")
            }
        })
        .collect()
}

/// Samples from the region: exact uniform sampling for heavy-coordinate
/// cells, otherwise rejection from the uniform simplex with projection as fallback.
fn region_samples(r: &Region, n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let b = r.dim();
    let uniform_simplex = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        let mut x: Vec<f64> = (0..b).map(|_| -(rng.gen::<f64>().max(f64::MIN_POSITIVE)).ln()).collect();
        let s: f64 = x.iter().sum();
        x.iter_mut().for_each(|v| *v /= s);
        x
    };
    (0..n)
        .map(|_| {
            if let Region::Cell(RegionSpec {
                kind: PartitionKind::MaxBased,
                index,
                epsilon,
                ..
            }) = r
            {
                if *index > 0 {
                    let mut x: Vec<f64> = uniform_simplex(rng).iter().map(|v| v * epsilon).collect();
                    x[index - 1] += 1.0 - epsilon;
                    return x;
                }
            }
            for _ in 0..64 {
                let x = uniform_simplex(rng);
                if r.contains(&x, 0.0) {
                    return x;
                }
            }
            r.project_raw(&uniform_simplex(rng)).expect("non-empty region")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SearchConfig {
        SearchConfig {
            restarts: 16,
            max_iterations: 400,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn degenerate_order_gives_zero() {
        let ctx = KernelContext::new(4, 4).unwrap();
        let w = psi_max_global(&ctx, &quick()).unwrap();
        assert_eq!(w.value, 0.0);
    }

    #[test]
    fn global_maxima_small() {
        let w = psi_max_global(&KernelContext::new(6, 4).unwrap(), &quick()).unwrap();
        assert!((w.value - 0.192).abs() < 1e-9, "{}", w.value);
        let w = psi_max_global(&KernelContext::new(5, 3).unwrap(), &quick()).unwrap();
        assert!((w.value - 0.3892257).abs() < 1e-6, "{}", w.value);
    }

    #[test]
    fn witness_matches_kernel() {
        let ctx = KernelContext::new(7, 5).unwrap();
        let r0 = Region::cell(PartitionKind::MaxBased, 7, 0.09, 0).unwrap();
        let r1 = Region::cell(PartitionKind::MaxBased, 7, 0.09, 1).unwrap();
        let w = maximize_pair(&ctx, &r0, &r1, &quick()).unwrap();
        assert!(w.is_feasible(&r0, &r1));
        let direct = crate::kernel::psi_eval(&ctx, &w.p, &w.q).unwrap();
        assert!((direct - w.value).abs() < 1e-12);
        assert!((w.value - 0.0925926).abs() < 1e-6);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let ctx = KernelContext::new(5, 3).unwrap();
        let r = Region::Simplex { b: 6 };
        assert!(maximize_pair(&ctx, &r, &r, &quick()).is_err());
    }

    #[test]
    fn config_validation() {
        let bad = SearchConfig {
            restarts: 0,
            ..SearchConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SearchConfig {
            step_decay: 1.0,
            ..SearchConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn golden_section_finds_interior_and_boundary() {
        let (t, v) = golden_max(&|t: f64| -(t - 0.3) * (t - 0.3), 0.0, 1.0);
        assert!((t - 0.3).abs() < 1e-6 && v > -1e-12);
        let (t, _) = golden_max(&|t: f64| t, 0.0, 1.0);
        assert!((t - 1.0).abs() < 1e-12);
    }

    #[test]
    fn levels_builder() {
        assert_eq!(levels(4, &[(0, 1.0)]).unwrap(), vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(levels(3, &[(1, 0.0)]).unwrap(), vec![0.5, 0.0, 0.5]);
        assert!(levels(3, &[(1, 0.5), (1, 0.2)]).is_none());
        assert!(levels(3, &[(0, 0.7), (1, 0.7)]).is_none());
    }
}
