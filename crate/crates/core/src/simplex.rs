//! Probability-simplex geometry.
//!
//! Distributions over `b` symbols, the two families of simplex partitions
//! (cells keyed on the largest or the smallest entry), membership tests,
//! Euclidean projection onto cell closures and exact lattice enumeration.

use serde::{Deserialize, Serialize};

use crate::error::{params, Error, Result};

/// Absolute tolerance on the total mass of a distribution.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// A point of the probability simplex over `b >= 2` symbols.
#[derive(Clone, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Validates `values` as a distribution over `b` symbols.
    ///
    /// Entries in `[-1e-12, 0)` are clamped to zero and the result is
    /// rescaled to unit mass. The total must already be within
    /// [`SUM_TOLERANCE`] of one.
    pub fn new(values: &[f64], b: usize) -> Result<Self> {
        if b < 2 {
            return Err(Error::InvalidDistribution(format!(
                "alphabet size must be at least 2, got {b}"
            )));
        }
        if values.len() != b {
            return Err(Error::DimensionMismatch {
                expected: b,
                actual: values.len(),
            });
        }
        let mut probs = Vec::with_capacity(b);
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidDistribution(format!(
                    "entry {i} is not finite"
                )));
            }
            if v < -SUM_TOLERANCE {
                return Err(Error::InvalidDistribution(format!(
                    "entry {i} is negative ({v})"
                )));
            }
            probs.push(v.max(0.0));
        }
        let total: f64 = probs.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidDistribution("zero total mass".into()));
        }
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "total mass {total} differs from 1 by more than {SUM_TOLERANCE:e}"
            )));
        }
        for p in &mut probs {
            *p /= total;
        }
        Ok(Self { probs })
    }

    pub fn uniform(b: usize) -> Self {
        Self {
            probs: vec![1.0 / b as f64; b],
        }
    }

    pub fn point_mass(b: usize, symbol: usize) -> Self {
        let mut probs = vec![0.0; b];
        probs[symbol] = 1.0;
        Self { probs }
    }

    /// Builds a distribution from non-negative weights by rescaling them.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || weights.iter().any(|w| *w < 0.0 || !w.is_finite()) {
            return Err(Error::InvalidDistribution(
                "weights must be finite, non-negative and not all zero".into(),
            ));
        }
        let scaled: Vec<f64> = weights.iter().map(|w| w / total).collect();
        Self::new(&scaled, weights.len())
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Relabels coordinates: entry `i` of the result is entry `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            probs: perm.iter().map(|&i| self.probs[i]).collect(),
        }
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }
}

impl AsRef<[f64]> for Distribution {
    fn as_ref(&self) -> &[f64] {
        &self.probs
    }
}

/// Which extreme entry defines the unbalanced cells of a partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PartitionKind {
    /// Cell `i` holds distributions with `p_i > 1 - eps`.
    MaxBased,
    /// Cell `i` holds distributions whose (first) minimum sits at `i` and is below `eps`.
    MinBased,
}

impl PartitionKind {
    /// Largest admissible threshold (exclusive) for alphabet size `b`.
    pub fn epsilon_limit(self, b: usize) -> f64 {
        match self {
            PartitionKind::MaxBased => 1.0 / (b as f64 - 1.0),
            PartitionKind::MinBased => 1.0 / b as f64,
        }
    }

    pub fn check_epsilon(self, b: usize, epsilon: f64) -> Result<()> {
        if b < 2 {
            return Err(params(format!("alphabet size must be at least 2, got {b}")));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(params(format!("epsilon must lie in (0,1), got {epsilon}")));
        }
        let limit = self.epsilon_limit(b);
        if epsilon >= limit {
            return Err(params(format!(
                "{self:?} partition with b={b} needs epsilon < {limit}, got {epsilon}"
            )));
        }
        Ok(())
    }
}

/// One cell of a max-based or min-based partition of the simplex.
///
/// `index == 0` is the balanced cell; `index == i >= 1` is the unbalanced
/// cell attached to coordinate `i` (1-based, so coordinate slot `i - 1`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub kind: PartitionKind,
    pub b: usize,
    pub epsilon: f64,
    pub index: usize,
    pub use_closure: bool,
}

impl RegionSpec {
    pub fn new(kind: PartitionKind, b: usize, epsilon: f64, index: usize) -> Result<Self> {
        kind.check_epsilon(b, epsilon)?;
        if index > b {
            return Err(params(format!("cell index {index} exceeds b={b}")));
        }
        Ok(Self {
            kind,
            b,
            epsilon,
            index,
            use_closure: false,
        })
    }

    pub fn closed(mut self) -> Self {
        self.use_closure = true;
        self
    }

    pub fn is_balanced(&self) -> bool {
        self.index == 0
    }

    /// Zero-based coordinate of an unbalanced cell.
    pub fn coordinate(&self) -> Option<usize> {
        self.index.checked_sub(1)
    }
}

/// Tests whether `p` lies in the cell (or its closure when `use_closure` is set).
pub fn region_member(p: &Distribution, r: &RegionSpec) -> Result<bool> {
    if p.len() != r.b {
        return Err(Error::DimensionMismatch {
            expected: r.b,
            actual: p.len(),
        });
    }
    let x = p.probs();
    let eps = r.epsilon;
    let inside = match (r.kind, r.coordinate()) {
        (PartitionKind::MaxBased, None) => x.iter().all(|&v| v <= 1.0 - eps),
        (PartitionKind::MaxBased, Some(i)) => {
            if r.use_closure {
                x[i] >= 1.0 - eps
            } else {
                x[i] > 1.0 - eps
            }
        }
        (PartitionKind::MinBased, None) => x.iter().all(|&v| v >= eps),
        (PartitionKind::MinBased, Some(i)) => {
            let lowest = x.iter().all(|&v| v >= x[i]);
            if r.use_closure {
                x[i] <= eps && lowest
            } else {
                x[i] < eps && lowest && x[..i].iter().all(|&v| v > x[i])
            }
        }
    };
    Ok(inside)
}

/// A linear inequality `sum coeff * x[idx] <= rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearConstraint {
    pub terms: Vec<(usize, f64)>,
    pub rhs: f64,
}

impl LinearConstraint {
    fn new(terms: Vec<(usize, f64)>, rhs: f64) -> Self {
        Self { terms, rhs }
    }

    pub fn slack(&self, x: &[f64]) -> f64 {
        self.rhs - self.terms.iter().map(|&(i, c)| c * x[i]).sum::<f64>()
    }
}

/// A closed convex subset of the simplex over which `Ψ` is maximized.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Region {
    /// The whole simplex over `b` symbols.
    Simplex { b: usize },
    /// The closure of a partition cell.
    Cell(RegionSpec),
    /// `{p : p_coord <= cap}`, a relaxation of a min-based unbalanced cell.
    CoordinateCap { b: usize, coord: usize, cap: f64 },
}

impl Region {
    pub fn cell(kind: PartitionKind, b: usize, epsilon: f64, index: usize) -> Result<Self> {
        Ok(Region::Cell(RegionSpec::new(kind, b, epsilon, index)?.closed()))
    }

    pub fn dim(&self) -> usize {
        match self {
            Region::Simplex { b } | Region::CoordinateCap { b, .. } => *b,
            Region::Cell(spec) => spec.b,
        }
    }

    /// The inequalities that cut this region out of the affine hull `sum x = 1`.
    pub fn constraints(&self) -> Vec<LinearConstraint> {
        let b = self.dim();
        let nonneg = |lower: f64| -> Vec<LinearConstraint> {
            (0..b)
                .map(|h| LinearConstraint::new(vec![(h, -1.0)], -lower))
                .collect()
        };
        match *self {
            Region::Simplex { .. } => nonneg(0.0),
            Region::CoordinateCap { coord, cap, .. } => {
                let mut c = nonneg(0.0);
                c.push(LinearConstraint::new(vec![(coord, 1.0)], cap));
                c
            }
            Region::Cell(spec) => {
                let eps = spec.epsilon;
                match (spec.kind, spec.coordinate()) {
                    (PartitionKind::MaxBased, None) => {
                        let mut c = nonneg(0.0);
                        c.extend((0..b).map(|h| LinearConstraint::new(vec![(h, 1.0)], 1.0 - eps)));
                        c
                    }
                    (PartitionKind::MaxBased, Some(i)) => {
                        let mut c = nonneg(0.0);
                        c.push(LinearConstraint::new(vec![(i, -1.0)], -(1.0 - eps)));
                        c
                    }
                    (PartitionKind::MinBased, None) => nonneg(eps),
                    (PartitionKind::MinBased, Some(i)) => {
                        let mut c = nonneg(0.0);
                        c.push(LinearConstraint::new(vec![(i, 1.0)], eps));
                        c.extend(
                            (0..b)
                                .filter(|&h| h != i)
                                .map(|h| LinearConstraint::new(vec![(i, 1.0), (h, -1.0)], 0.0)),
                        );
                        c
                    }
                }
            }
        }
    }

    /// Closed-set membership with slack `tol` on every inequality and on the total mass.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dim()
            && (x.iter().sum::<f64>() - 1.0).abs() <= tol.max(SUM_TOLERANCE)
            && self.constraints().iter().all(|c| c.slack(x) >= -tol)
    }

    /// Euclidean projection of `x` onto the region.
    pub fn project(&self, x: &[f64]) -> Result<Distribution> {
        let b = self.dim();
        if x.len() != b {
            return Err(Error::DimensionMismatch {
                expected: b,
                actual: x.len(),
            });
        }
        let projected = self
            .project_raw(x)
            .ok_or_else(|| Error::InfeasibleRegion(format!("{self:?} has no feasible point")))?;
        Distribution::new(&projected, b)
    }

    /// Projection without validation; `None` when the region is empty.
    pub(crate) fn project_raw(&self, x: &[f64]) -> Option<Vec<f64>> {
        let b = self.dim();
        let inf = f64::INFINITY;
        let projected = match *self {
            Region::Simplex { .. } => box_simplex_projection(x, &vec![0.0; b], &vec![inf; b], 1.0),
            Region::CoordinateCap { coord, cap, .. } => {
                let mut upper = vec![inf; b];
                upper[coord] = cap;
                box_simplex_projection(x, &vec![0.0; b], &upper, 1.0)
            }
            Region::Cell(spec) => {
                let eps = spec.epsilon;
                match (spec.kind, spec.coordinate()) {
                    (PartitionKind::MaxBased, None) => {
                        box_simplex_projection(x, &vec![0.0; b], &vec![1.0 - eps; b], 1.0)
                    }
                    (PartitionKind::MaxBased, Some(i)) => {
                        let mut lower = vec![0.0; b];
                        lower[i] = 1.0 - eps;
                        box_simplex_projection(x, &lower, &vec![inf; b], 1.0)
                    }
                    (PartitionKind::MinBased, None) => {
                        box_simplex_projection(x, &vec![eps; b], &vec![inf; b], 1.0)
                    }
                    (PartitionKind::MinBased, Some(i)) => Some(min_cell_projection(x, i, eps)),
                }
            }
        };
        projected
    }
}

/// Projection of `x` onto the closure of the cell described by `r`.
pub fn project_to_region(x: &[f64], r: &RegionSpec) -> Result<Distribution> {
    Region::Cell(r.closed()).project(x)
}

/// Projects `y` onto `{x : lower <= x <= upper, sum x = target}`.
///
/// The solution is `clamp(y - lambda, lower, upper)` for the unique shift
/// `lambda` that meets the target; it is located exactly among the
/// breakpoints of the piecewise-linear mass function.
fn box_simplex_projection(y: &[f64], lower: &[f64], upper: &[f64], target: f64) -> Option<Vec<f64>> {
    let lo_mass: f64 = lower.iter().sum();
    let hi_mass: f64 = upper.iter().sum();
    if lo_mass > target + SUM_TOLERANCE || hi_mass < target - SUM_TOLERANCE {
        return None;
    }
    let mass = |lambda: f64| -> f64 {
        y.iter()
            .zip(lower.iter().zip(upper))
            .map(|(&v, (&l, &u))| (v - lambda).clamp(l, u))
            .sum()
    };
    let mut breaks: Vec<f64> = Vec::with_capacity(2 * y.len());
    for (i, &v) in y.iter().enumerate() {
        breaks.push(v - lower[i]);
        if upper[i].is_finite() {
            breaks.push(v - upper[i]);
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    // mass() is non-increasing in lambda; find the bracketing breakpoints.
    let lambda = {
        let first = breaks[0];
        let last = *breaks.last().expect("non-empty");
        if mass(first) <= target {
            // every coordinate is at its lower bound or (with infinite
            // upper bounds) the mass grows linearly below `first`.
            let free = upper.iter().filter(|u| !u.is_finite()).count().max(1) as f64;
            let m = mass(first);
            if upper.iter().all(|u| u.is_finite()) {
                first
            } else {
                first - (target - m) / free
            }
        } else if mass(last) >= target {
            last
        } else {
            let pos = breaks.partition_point(|&l| mass(l) > target);
            let (a, b) = (breaks[pos - 1], breaks[pos]);
            let (ma, mb) = (mass(a), mass(b));
            if ma == mb {
                a
            } else {
                a + (ma - target) * (b - a) / (ma - mb)
            }
        }
    };
    Some(
        y.iter()
            .zip(lower.iter().zip(upper))
            .map(|(&v, (&l, &u))| (v - lambda).clamp(l, u))
            .collect(),
    )
}

/// Projection onto `{x in simplex : x_i <= eps, x_h >= x_i for all h}`.
///
/// For a fixed floor `t = x_i` the remaining coordinates solve a box-simplex
/// projection; the distance is convex in `t`, so the optimal floor is found
/// by bisection on the sign of its derivative.
fn min_cell_projection(y: &[f64], i: usize, eps: f64) -> Vec<f64> {
    let b = y.len();
    let rest: Vec<f64> = y
        .iter()
        .enumerate()
        .filter(|&(h, _)| h != i)
        .map(|(_, &v)| v)
        .collect();
    let inner = |t: f64| -> Vec<f64> {
        box_simplex_projection(&rest, &vec![t; b - 1], &vec![f64::INFINITY; b - 1], 1.0 - t)
            .expect("floor below 1/b is always feasible")
    };
    // derivative (halved) of the squared distance with respect to the floor
    let slope = |t: f64| -> f64 {
        let x = inner(t);
        let free: Vec<usize> = (0..b - 1).filter(|&h| x[h] > t).collect();
        let lambda = match free.first() {
            Some(&h) => rest[h] - x[h],
            None => {
                // all coordinates sit on the floor; any shift at least this large works
                rest.iter().map(|&v| v - t).fold(f64::NEG_INFINITY, f64::max)
            }
        };
        let active: f64 = (0..b - 1)
            .filter(|&h| x[h] <= t)
            .map(|h| (t - rest[h] + lambda).max(0.0))
            .sum();
        (t - y[i]) + lambda + active
    };
    let t_max = eps.min(1.0 / b as f64);
    let t = if slope(0.0) >= 0.0 {
        0.0
    } else if slope(t_max) <= 0.0 {
        t_max
    } else {
        let (mut lo, mut hi) = (0.0_f64, t_max);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if slope(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let others = inner(t);
    let mut out = Vec::with_capacity(b);
    let mut it = others.into_iter();
    for h in 0..b {
        if h == i {
            out.push(t);
        } else {
            out.push(it.next().expect("b-1 entries"));
        }
    }
    out
}

/// Cluster masses `(eta_0, eta_1, ..., eta_b)`: balanced cell first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EtaVector {
    masses: Vec<f64>,
}

impl EtaVector {
    pub fn new(masses: Vec<f64>) -> Result<Self> {
        if masses.len() < 2 {
            return Err(params("an eta vector needs at least two cells"));
        }
        if masses.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(params("eta masses must be finite and non-negative"));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(params(format!("eta masses sum to {total}, not 1")));
        }
        Ok(Self { masses })
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn balanced(&self) -> f64 {
        self.masses[0]
    }

    pub fn unbalanced(&self) -> &[f64] {
        &self.masses[1..]
    }
}

/// Number of lattice points `binomial(D + b - 1, b - 1)`, saturating at `u128::MAX`.
pub fn grid_count(b: usize, denominator: usize) -> u128 {
    binomial((denominator + b - 1) as u128, (b - 1) as u128)
}

pub(crate) fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Every distribution with entries in `(1/D) Z`, in lexicographic order of
/// the integer compositions (first point `(0, ..., 0, 1)`).
pub fn grid_enumerate(b: usize, denominator: usize) -> GridIter {
    assert!(b >= 2 && denominator >= 1, "grid needs b >= 2 and D >= 1");
    let mut counts = vec![0usize; b];
    counts[b - 1] = denominator;
    GridIter {
        counts: Some(counts),
        denominator,
    }
}

/// Iterator over integer compositions of `D` into `b` parts, yielded as distributions.
#[derive(Clone, Debug)]
pub struct GridIter {
    counts: Option<Vec<usize>>,
    denominator: usize,
}

impl GridIter {
    /// Advances and returns the raw composition instead of a distribution.
    pub fn next_composition(&mut self) -> Option<Vec<usize>> {
        let current = self.counts.take()?;
        let mut next = current.clone();
        let b = next.len();
        if let Some(j) = (1..b).rev().find(|&j| next[j] > 0) {
            let carried = next[j];
            next[j - 1] += 1;
            next[j] = 0;
            next[b - 1] += carried - 1;
            self.counts = Some(next);
        }
        Some(current)
    }
}

impl Iterator for GridIter {
    type Item = Distribution;

    fn next(&mut self) -> Option<Distribution> {
        let d = self.denominator as f64;
        self.next_composition().map(|c| Distribution {
            probs: c.iter().map(|&n| n as f64 / d).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn make_distribution_cases() {
        let u = Distribution::new(&[0.25; 4], 4).unwrap();
        assert_eq!(u.probs(), &[0.25; 4]);
        assert!(Distribution::new(&[1.0, 0.0, 0.0, 0.0, 0.0], 5).is_ok());
        assert!(matches!(
            Distribution::new(&[0.5, 0.6], 2),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(matches!(
            Distribution::new(&[0.5, 0.5], 3),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(Distribution::new(&[-1e-3, 1.001], 2).is_err());
        assert!(Distribution::new(&[0.0, 0.0], 2).is_err());
        let clamped = Distribution::new(&[-5e-13, 1.0 + 5e-13], 2).unwrap();
        assert_eq!(clamped.probs()[0], 0.0);
    }

    #[test]
    fn membership_examples() {
        let b = 7;
        let mut p = vec![0.05 / 6.0; b];
        p[0] = 0.95;
        let p = Distribution::new(&p, b).unwrap();
        let cell1 = RegionSpec::new(PartitionKind::MaxBased, b, 0.09, 1).unwrap();
        assert!(region_member(&p, &cell1).unwrap());

        let u = Distribution::uniform(6);
        let bal = RegionSpec::new(PartitionKind::MinBased, 6, 1.0 / 20.0, 0).unwrap();
        assert!(region_member(&u, &bal).unwrap());

        let q = Distribution::new(&[0.0, 0.25, 0.25, 0.25, 0.25], 5).unwrap();
        let c1 = RegionSpec::new(PartitionKind::MinBased, 5, 0.14, 1).unwrap();
        assert!(region_member(&q, &c1).unwrap());
        let c2 = RegionSpec::new(PartitionKind::MinBased, 5, 0.14, 2).unwrap();
        assert!(!region_member(&q, &c2).unwrap());
        assert!(region_member(&Distribution::uniform(4), &c1).is_err());
    }

    #[test]
    fn min_cell_tie_breaking_and_closure() {
        let p = Distribution::new(&[0.1, 0.1, 0.4, 0.4], 4).unwrap();
        let c1 = RegionSpec::new(PartitionKind::MinBased, 4, 0.2, 1).unwrap();
        let c2 = RegionSpec::new(PartitionKind::MinBased, 4, 0.2, 2).unwrap();
        assert!(region_member(&p, &c1).unwrap());
        assert!(!region_member(&p, &c2).unwrap());
        assert!(region_member(&p, &c2.closed()).unwrap());
    }

    #[test]
    fn epsilon_admissibility() {
        assert!(RegionSpec::new(PartitionKind::MaxBased, 7, 1.0 / 6.0, 0).is_err());
        assert!(RegionSpec::new(PartitionKind::MaxBased, 7, 0.16, 0).is_ok());
        assert!(RegionSpec::new(PartitionKind::MinBased, 6, 1.0 / 6.0, 0).is_err());
        assert!(RegionSpec::new(PartitionKind::MinBased, 6, 0.0, 0).is_err());
        assert!(RegionSpec::new(PartitionKind::MinBased, 6, 0.1, 7).is_err());
    }

    #[test]
    fn grid_counts() {
        let pts: Vec<_> = grid_enumerate(2, 2).map(|d| d.into_vec()).collect();
        assert_eq!(pts, vec![vec![0.0, 1.0], vec![0.5, 0.5], vec![1.0, 0.0]]);
        assert_eq!(grid_enumerate(3, 4).count(), 15);
        assert_eq!(grid_enumerate(5, 10).count(), 1001);
        assert_eq!(grid_count(5, 10), 1001);
        assert_eq!(grid_count(3, 4), 15);
        assert_eq!(grid_enumerate(4, 1).count(), 4);
    }

    #[test]
    fn grid_points_are_distinct() {
        let mut seen = std::collections::HashSet::new();
        let mut it = grid_enumerate(4, 6);
        while let Some(c) = it.next_composition() {
            assert_eq!(c.iter().sum::<usize>(), 6);
            assert!(seen.insert(c));
        }
        assert_eq!(seen.len() as u128, grid_count(4, 6));
    }

    #[test]
    fn projection_examples() {
        let r = RegionSpec::new(PartitionKind::MinBased, 5, 0.1, 0).unwrap();
        let p = project_to_region(&[2.0, 0.0, 0.0, 0.0, 0.0], &r).unwrap();
        assert!(close(p.probs(), &[0.6, 0.1, 0.1, 0.1, 0.1], 1e-14));

        let r = RegionSpec::new(PartitionKind::MaxBased, 5, 0.2, 1).unwrap();
        let p = project_to_region(&[0.2; 5], &r).unwrap();
        assert!(close(p.probs(), &[0.8, 0.05, 0.05, 0.05, 0.05], 1e-14));

        let inside = [0.3, 0.2, 0.2, 0.2, 0.1];
        let r = RegionSpec::new(PartitionKind::MaxBased, 5, 0.2, 0).unwrap();
        let p = project_to_region(&inside, &r).unwrap();
        assert!(close(p.probs(), &inside, 1e-15));
    }

    #[test]
    fn min_cell_projection_is_feasible() {
        let r = RegionSpec::new(PartitionKind::MinBased, 5, 0.1, 3).unwrap();
        let region = Region::Cell(r.closed());
        for x in [
            vec![0.5, 0.3, 0.9, 0.0, -0.2],
            vec![0.2; 5],
            vec![1.0, 0.0, 0.0, 0.0, 0.0],
            vec![-1.0, -1.0, 3.0, -1.0, -1.0],
        ] {
            let p = region.project(&x).unwrap();
            assert!(region.contains(p.probs(), 1e-12), "{:?}", p);
            assert!(region_member(&p, &r.closed()).unwrap() || region.contains(p.probs(), 1e-12));
        }
    }

    #[test]
    fn coordinate_cap_projection() {
        let region = Region::CoordinateCap { b: 4, coord: 0, cap: 0.1 };
        let p = region.project(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(close(p.probs(), &[0.1, 0.3, 0.3, 0.3], 1e-14));
    }

    #[test]
    fn eta_vector_validation() {
        assert!(EtaVector::new(vec![0.5, 0.25, 0.25]).is_ok());
        assert!(EtaVector::new(vec![0.5, 0.6]).is_err());
        assert!(EtaVector::new(vec![-0.1, 1.1]).is_err());
    }
}
