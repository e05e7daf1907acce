//! Published bound values used for comparison output and default thresholds.
//!
//! The Arikan and Guruswami–Riazanov columns are stored for display only;
//! this crate does not recompute them.

use crate::simplex::PartitionKind;

/// One row of the comparison of previously known bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KnownBoundsRow {
    pub b: usize,
    pub k: usize,
    /// Kernel-maximum bound with `j = k - 2`.
    pub psi_max: f64,
    /// The generalized `j = 2` bound.
    pub dvj: f64,
    pub arikan: f64,
    pub guruswami_riazanov: f64,
    pub korner_marton: f64,
    pub korner_marton_j: usize,
}

const fn known(
    b: usize,
    k: usize,
    psi_max: f64,
    dvj: f64,
    arikan: f64,
    guruswami_riazanov: f64,
    korner_marton: f64,
    korner_marton_j: usize,
) -> KnownBoundsRow {
    KnownBoundsRow {
        b,
        k,
        psi_max,
        dvj,
        arikan,
        guruswami_riazanov,
        korner_marton,
        korner_marton_j,
    }
}

pub const KNOWN_BOUNDS: [KnownBoundsRow; 16] = [
    known(5, 4, 0.66126, 0.57303, 0.61142, 0.74834, 0.73697, 0),
    known(6, 4, 0.87963, 0.77709, 0.83904, 1.09604, 1.00000, 0),
    known(7, 4, 1.03711, 0.94372, 1.02931, 1.40593, 1.22239, 0),
    known(5, 5, 0.16964, 0.25050, 0.23560, 0.19079, 0.19200, 3),
    known(6, 5, 0.34597, 0.45728, 0.44149, 0.43207, 0.44027, 3),
    known(6, 6, 0.08760, 0.21170, 0.15484, 0.09228, 0.09260, 4),
    known(7, 6, 0.19897, 0.38873, 0.30554, 0.23524, 0.23765, 4),
    known(8, 6, 0.31799, 0.53847, 0.44888, 0.40330, 0.41016, 4),
    known(7, 7, 0.04379, 0.18417, 0.09747, 0.04279, 0.04284, 5),
    known(8, 7, 0.10865, 0.34034, 0.20340, 0.12134, 0.12189, 5),
    known(9, 7, 0.19054, 0.47461, 0.31204, 0.22547, 0.22761, 5),
    known(8, 8, 0.02077, 0.16323, 0.05769, 0.01922, 0.01923, 6),
    known(9, 8, 0.05686, 0.30348, 0.12874, 0.06001, 0.06013, 6),
    known(10, 8, 0.10791, 0.42566, 0.20754, 0.12048, 0.12096, 6),
    known(10, 9, 0.02889, 0.27417, 0.07668, 0.02874, 0.02876, 7),
    known(11, 10, 0.01407, 0.25018, 0.04289, 0.01342, 0.01343, 8),
];

/// One row of the comparison with the clustered bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClusterBoundsRow {
    pub b: usize,
    pub k: usize,
    pub cluster: f64,
    pub psi_max: f64,
    pub dvj: f64,
    pub arikan: f64,
    pub guruswami_riazanov: f64,
}

const fn cluster(
    b: usize,
    k: usize,
    cluster: f64,
    psi_max: f64,
    dvj: f64,
    arikan: f64,
    guruswami_riazanov: f64,
) -> ClusterBoundsRow {
    ClusterBoundsRow {
        b,
        k,
        cluster,
        psi_max,
        dvj,
        arikan,
        guruswami_riazanov,
    }
}

pub const CLUSTER_BOUNDS: [ClusterBoundsRow; 8] = [
    cluster(5, 5, 0.16894, 0.16964, 0.25050, 0.23560, 0.19079),
    cluster(6, 5, 0.34512, 0.34597, 0.45728, 0.44149, 0.43207),
    cluster(6, 6, 0.08475, 0.08760, 0.21170, 0.15484, 0.09228),
    cluster(7, 7, 0.04090, 0.04379, 0.18417, 0.09747, 0.04279),
    cluster(8, 8, 0.01889, 0.02077, 0.16323, 0.05769, 0.01922),
    cluster(9, 8, 0.05616, 0.05686, 0.30348, 0.12874, 0.06001),
    cluster(10, 9, 0.02773, 0.02889, 0.27417, 0.07668, 0.02874),
    cluster(11, 10, 0.01321, 0.01407, 0.25018, 0.04289, 0.01342),
];

/// Partition and threshold used for a clustered bound at `(b, k)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClusterCase {
    pub b: usize,
    pub k: usize,
    pub kind: PartitionKind,
    pub epsilon: f64,
    /// Textual form of `epsilon`, parseable by [`crate::expr::parse_real`].
    pub epsilon_text: &'static str,
}

pub fn cluster_cases() -> Vec<ClusterCase> {
    use PartitionKind::*;
    let case = |b, k, kind, epsilon, epsilon_text| ClusterCase {
        b,
        k,
        kind,
        epsilon,
        epsilon_text,
    };
    vec![
        case(5, 5, MinBased, (4.0 + 5f64.sqrt()) / 44.0, "(4+sqrt(5))/44"),
        case(6, 5, MinBased, 1.0 / 10.0, "1/10"),
        case(6, 6, MinBased, 1.0 / 20.0, "1/20"),
        case(7, 7, MaxBased, 9.0 / 100.0, "9/100"),
        case(8, 8, MaxBased, 3.0 / 25.0, "3/25"),
        case(9, 8, MaxBased, 1.0 / 10.0, "1/10"),
        case(10, 9, MaxBased, 1.0 / 15.0, "1/15"),
        case(11, 10, MaxBased, 1.0 / 11.0, "1/11"),
    ]
}

/// The default threshold for `(b, k)` under `kind`, when one is tabulated.
pub fn default_epsilon(b: usize, k: usize, kind: PartitionKind) -> Option<f64> {
    cluster_cases()
        .into_iter()
        .find(|c| c.b == b && c.k == k && c.kind == kind)
        .map(|c| c.epsilon)
}

/// The partition the tabulated clustered bound uses at `(b, k)`.
pub fn default_case(b: usize, k: usize) -> Option<ClusterCase> {
    cluster_cases().into_iter().find(|c| c.b == b && c.k == k)
}

/// Published cell suprema `m1..m4` for one clustered case, with the order
/// `j` they were computed for.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PublishedSuprema {
    pub b: usize,
    pub k: usize,
    pub j: usize,
    pub kind: PartitionKind,
    pub epsilon_text: &'static str,
    pub m: [f64; 4],
    /// Published maximum of the reduced form built from these suprema.
    pub reduced_max: f64,
    /// Published rate bound, at full printed precision.
    pub rate: f64,
}

pub fn published_suprema() -> Vec<PublishedSuprema> {
    use PartitionKind::*;
    let row = |b, k, j, kind, epsilon_text, m, reduced_max, rate| PublishedSuprema {
        b,
        k,
        j,
        kind,
        epsilon_text,
        m,
        reduced_max,
        rate,
    };
    vec![
        row(7, 7, 5, MaxBased, "9/100", [0.085679, 0.092593, 0.000006, 0.000107], 0.0861594, 0.0408975),
        row(8, 8, 6, MaxBased, "3/25", [0.038453, 0.042840, 0.000002, 0.000022], 0.0388599, 0.0188887),
        row(9, 8, 6, MaxBased, "1/10", [0.075870, 0.076905, 0.000001, 0.000015], 0.0758830, 0.0561537),
        row(10, 9, 7, MaxBased, "1/15", [0.036289, 0.037935, 3.4e-9, 8.5e-8], 0.0363565, 0.0277279),
        row(11, 10, 8, MaxBased, "1/11", [0.016928, 0.018144, 1.4e-9, 2.7e-8], 0.0170049, 0.0132033),
        row(5, 5, 3, MinBased, "(4+sqrt(5))/44", [0.384033, 0.389226, 0.374759, 0.389226], 0.3873676, 0.1689325),
        row(6, 5, 3, MinBased, "1/10", [0.555625, 0.558467, 0.535106, 0.558467], 0.5567010, 0.3451130),
        row(6, 6, 4, MinBased, "1/20", [0.185185, 0.178857, 0.140664, 0.192000], 5.0 / 27.0, 5.0 / 59.0),
    ]
}
