//! Clustered bound: suprema of the kernel over pairs of partition cells,
//! maximization of the reduced quadratic form in the cluster masses, and the
//! resulting rate bound.

use serde::{Deserialize, Serialize};

use crate::classic::{rate_bound_from_m, BoundReport, Method};
use crate::error::{params, Result};
use crate::kernel::KernelContext;
use crate::optimize::{maximize_pair, psi_max_global, OptimumWitness, SearchConfig};
use crate::reference::default_epsilon;
use crate::simplex::{EtaVector, PartitionKind, Region};

/// How the same-cell supremum `m3` is taken.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SameCellMode {
    /// Over the closure of one unbalanced cell.
    #[default]
    Strict,
    /// Over the larger set where only the cell's coordinate is constrained
    /// (`p_1 <= ε` or `p_1 >= 1-ε`), without the ordering conditions.
    Relaxed,
}

/// The four cell-pair suprema with their witnesses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterMatrix {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
    pub witnesses: [OptimumWitness; 4],
    pub kind: PartitionKind,
    pub epsilon: f64,
    pub b: usize,
    pub j: usize,
}

impl ClusterMatrix {
    /// A matrix from given values, without witnesses (e.g. printed tables).
    pub fn from_values(
        kind: PartitionKind,
        b: usize,
        j: usize,
        epsilon: f64,
        m: [f64; 4],
    ) -> Result<Self> {
        kind.check_epsilon(b, epsilon)?;
        if m.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(params("cluster values must be finite and non-negative"));
        }
        let u = crate::simplex::Distribution::uniform(b);
        let blank = || OptimumWitness {
            value: f64::NAN,
            p: u.clone(),
            q: u.clone(),
            method: crate::optimize::WitnessMethod::CandidatePoint,
            converged: false,
        };
        Ok(Self {
            m1: m[0],
            m2: m[1],
            m3: m[2],
            m4: m[3],
            witnesses: [blank(), blank(), blank(), blank()],
            kind,
            epsilon,
            b,
            j,
        })
    }

    pub fn values(&self) -> [f64; 4] {
        [self.m1, self.m2, self.m3, self.m4]
    }
}

/// The region pairs behind `m1..m4`.
pub fn cell_pairs(
    kind: PartitionKind,
    b: usize,
    epsilon: f64,
    mode: SameCellMode,
) -> Result<[(Region, Region); 4]> {
    let cell = |i| Region::cell(kind, b, epsilon, i);
    let same = match mode {
        SameCellMode::Strict => (cell(1)?, cell(1)?),
        SameCellMode::Relaxed => {
            kind.check_epsilon(b, epsilon)?;
            let r = match kind {
                PartitionKind::MinBased => Region::CoordinateCap {
                    b,
                    coord: 0,
                    cap: epsilon,
                },
                PartitionKind::MaxBased => cell(1)?,
            };
            (r.clone(), r)
        }
    };
    Ok([(cell(0)?, cell(0)?), (cell(0)?, cell(1)?), same, (cell(1)?, cell(2)?)])
}

/// Suprema of `Ψ` over (balanced, balanced), (balanced, cell 1), (cell 1, cell 1)
/// and (cell 1, cell 2); other index pairs follow by symmetry.
pub fn compute_cluster_matrix(
    kind: PartitionKind,
    b: usize,
    j: usize,
    epsilon: f64,
    cfg: &SearchConfig,
) -> Result<ClusterMatrix> {
    compute_cluster_matrix_with(kind, b, j, epsilon, SameCellMode::Strict, cfg)
}

pub fn compute_cluster_matrix_with(
    kind: PartitionKind,
    b: usize,
    j: usize,
    epsilon: f64,
    mode: SameCellMode,
    cfg: &SearchConfig,
) -> Result<ClusterMatrix> {
    let ctx = KernelContext::new(b, j)?;
    let pairs = cell_pairs(kind, b, epsilon, mode)?;
    let mut ws = Vec::with_capacity(4);
    for (rp, rq) in &pairs {
        ws.push(maximize_pair(&ctx, rp, rq, cfg)?);
    }
    let witnesses: [OptimumWitness; 4] = ws.try_into().expect("four pairs");
    Ok(ClusterMatrix {
        m1: witnesses[0].value,
        m2: witnesses[1].value,
        m3: witnesses[2].value,
        m4: witnesses[3].value,
        witnesses,
        kind,
        epsilon,
        b,
        j,
    })
}

/// Which cluster masses are positive at the maximizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportPattern {
    pub balanced_active: bool,
    pub unbalanced_cells: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedFormResult {
    #[serde(rename = "M")]
    pub m: f64,
    pub eta: EtaVector,
    pub support_pattern: SupportPattern,
    /// Maximum of the same form with the cross term `η0·s·m2` taken once instead of twice.
    pub m_single_cross: f64,
}

/// `F(η) = η0² m1 + 2 η0 Ση_i m2 + Σ η_i² m3 + 2 Σ_{i<h} η_i η_h m4`.
pub fn reduced_form(m: [f64; 4], eta: &[f64]) -> f64 {
    let (e0, rest) = eta.split_first().expect("non-empty masses");
    let s: f64 = rest.iter().sum();
    let sq: f64 = rest.iter().map(|x| x * x).sum();
    e0 * e0 * m[0] + 2.0 * e0 * s * m[1] + sq * m[2] + (s * s - sq) * m[3]
}

/// Maximum of `a x² + 2 c x (1-x) + d (1-x)²` (or with `c` in place of `2c`
/// when `cross` is 1) over `x ∈ [0, 1]`.
fn max_quadratic(m1: f64, m2: f64, block: f64, cross: f64) -> (f64, f64) {
    let f = |x: f64| m1 * x * x + cross * m2 * x * (1.0 - x) + block * (1.0 - x) * (1.0 - x);
    let curvature = m1 - cross * m2 + block;
    let mut candidates = vec![0.0, 1.0];
    if curvature != 0.0 {
        let x = (block - 0.5 * cross * m2) / curvature;
        if (0.0..=1.0).contains(&x) {
            candidates.push(x);
        }
    }
    candidates
        .into_iter()
        .map(|x| (x, f(x)))
        .fold((0.0, f64::NEG_INFINITY), |best, c| if c.1 > best.1 { c } else { best })
}

/// Maximizes the reduced quadratic form over the `(b+1)`-simplex of cluster masses.
///
/// For fixed unbalanced mass `s`, spreading it evenly over `r` cells gives
/// `s² (m3/r + m4 (r-1)/r)`, so `r = b` when `m4 > m3` and `r = 1` otherwise;
/// what remains is a quadratic in `η0`.
pub fn maximize_reduced_form(cm: &ClusterMatrix) -> ReducedFormResult {
    let b = cm.b;
    let r = if cm.m4 > cm.m3 { b } else { 1 };
    let block = cm.m3 / r as f64 + cm.m4 * (r - 1) as f64 / r as f64;
    let (x, _) = max_quadratic(cm.m1, cm.m2, block, 2.0);
    let (_, single) = max_quadratic(cm.m1, cm.m2, block, 1.0);
    let mut masses = vec![0.0; b + 1];
    masses[0] = x;
    let active = if x < 1.0 { r } else { 0 };
    for m in masses.iter_mut().skip(1).take(active) {
        *m = (1.0 - x) / r as f64;
    }
    let m = reduced_form(cm.values(), &masses);
    ReducedFormResult {
        m,
        eta: EtaVector::new(masses).expect("masses on the simplex"),
        support_pattern: SupportPattern {
            balanced_active: x > 0.0,
            unbalanced_cells: active,
        },
        m_single_cross: single,
    }
}

/// The default `j` for a clustered bound at `k`.
pub fn default_order(k: usize) -> usize {
    k - 2
}

/// Rate bound from a clustered kernel maximum.
///
/// `j` defaults to `k-2`; `epsilon` defaults to the tabulated threshold for
/// `(b, k, kind)`.
pub fn cluster_rate_bound(
    b: usize,
    k: usize,
    kind: PartitionKind,
    epsilon: Option<f64>,
    j: Option<usize>,
    cfg: &SearchConfig,
) -> Result<BoundReport> {
    cluster_rate_bound_with(b, k, kind, epsilon, j, SameCellMode::Strict, cfg)
}

pub fn cluster_rate_bound_with(
    b: usize,
    k: usize,
    kind: PartitionKind,
    epsilon: Option<f64>,
    j: Option<usize>,
    mode: SameCellMode,
    cfg: &SearchConfig,
) -> Result<BoundReport> {
    if k < 4 || b < k {
        return Err(params(format!("clustered bound needs b >= k >= 4, got b={b}, k={k}")));
    }
    let j = j.unwrap_or(default_order(k));
    if !(2..=k - 2).contains(&j) {
        return Err(params(format!("j must lie in [2, {}], got {j}", k - 2)));
    }
    let epsilon = match epsilon.or_else(|| default_epsilon(b, k, kind)) {
        Some(e) => e,
        None => return Err(params(format!("no default threshold for ({b},{k}); pass one"))),
    };
    let cm = compute_cluster_matrix_with(kind, b, j, epsilon, mode, cfg)?;
    report_from_matrix(k, &cm, mode)
}

/// Rate bound from an already computed matrix.
pub fn report_from_matrix(k: usize, cm: &ClusterMatrix, mode: SameCellMode) -> Result<BoundReport> {
    let reduced = maximize_reduced_form(cm);
    let mut report = rate_bound_from_m(cm.b, k, cm.j, reduced.m)?;
    report.method = match cm.kind {
        PartitionKind::MaxBased => Method::ClusterMax,
        PartitionKind::MinBased => Method::ClusterMin,
    };
    report.epsilon = Some(cm.epsilon);
    let single = rate_bound_from_m(cm.b, k, cm.j, reduced.m_single_cross)?.value;
    let mut report = report
        .with("m1", cm.m1)
        .with("m2", cm.m2)
        .with("m3", cm.m3)
        .with("m4", cm.m4)
        .with("eta0", reduced.eta.balanced())
        .with("active_unbalanced_cells", reduced.support_pattern.unbalanced_cells)
        .with("M_single_cross", reduced.m_single_cross)
        .with("rate_single_cross", single)
        .with(
            "witnesses",
            serde_json::to_value(&cm.witnesses).expect("witnesses serialize"),
        );
    report.notes.push(format!(
        "balanced/unbalanced cross term counted twice; counted once it gives M={:.7}",
        reduced.m_single_cross
    ));
    if mode == SameCellMode::Relaxed {
        report.notes.push("same-cell supremum taken over the relaxed coordinate set".into());
    }
    Ok(report)
}

/// The kernel-maximum rate bound with `j = k-2` (no clustering).
pub fn psi_max_rate_bound(b: usize, k: usize, cfg: &SearchConfig) -> Result<BoundReport> {
    if k < 4 || b < k {
        return Err(params(format!("kernel-maximum bound needs b >= k >= 4, got b={b}, k={k}")));
    }
    let j = default_order(k);
    let ctx = KernelContext::new(b, j)?;
    let w = psi_max_global(&ctx, cfg)?;
    let mut report = rate_bound_from_m(b, k, j, w.value)?;
    report.method = Method::PsiMax;
    Ok(report
        .with("psi_max", w.value)
        .with("witness", serde_json::to_value(&w).expect("witness serializes")))
}

/// Clustered bound for each threshold in `grid`; also returns the index of
/// the smallest bound (ties keep the first).
pub fn epsilon_sweep(
    b: usize,
    k: usize,
    kind: PartitionKind,
    j: Option<usize>,
    grid: &[f64],
    cfg: &SearchConfig,
) -> Result<(Vec<BoundReport>, Option<usize>)> {
    for &e in grid {
        kind.check_epsilon(b, e)?;
    }
    let reports = grid
        .iter()
        .map(|&e| cluster_rate_bound(b, k, kind, Some(e), j, cfg))
        .collect::<Result<Vec<_>>>()?;
    let best = reports
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (i, r)| match best {
            Some((_, v)) if v <= r.value => best,
            _ => Some((i, r.value)),
        })
        .map(|(i, _)| i);
    Ok((reports, best))
}
