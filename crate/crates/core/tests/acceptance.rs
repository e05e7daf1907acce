//! Acceptance run: one PASS/FAIL line per criterion row, then a summary.
//! Exits non-zero when any row fails.

mod common;

use std::time::{Duration, Instant};

use num_rational::Ratio;
use phash_bounds::classic::{dvj_bound, km_bound, km_default_range, rate_bound_from_m};
use phash_bounds::cluster::{
    cluster_rate_bound, compute_cluster_matrix, compute_cluster_matrix_with, maximize_reduced_form,
    psi_max_rate_bound, reduced_form, ClusterMatrix, SameCellMode,
};
use phash_bounds::cluster::cell_pairs;
use phash_bounds::codes::{verify_hash_code, Code};
use phash_bounds::expr::parse_real;
use phash_bounds::kernel::{psi_eval_naive, psi_generic, psi_gradient};
use phash_bounds::optimize::{oracle_scan, SearchConfig};
use phash_bounds::reference::{published_suprema, PublishedSuprema, CLUSTER_BOUNDS, KNOWN_BOUNDS};
use phash_bounds::render::{format_up, unit_distance};
use phash_bounds::simplex::{grid_enumerate, region_member};
use phash_bounds::{psi_eval, Distribution, KernelContext, PartitionKind, Region, RegionSpec};
use rand::Rng;

#[derive(Default)]
struct Tally {
    passed: usize,
    failed: Vec<String>,
}

impl Tally {
    fn row(&mut self, criterion: u8, label: &str, pass: bool, detail: String) {
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("[{tag}] C{criterion} {label}: {detail}");
        if pass {
            self.passed += 1;
        } else {
            self.failed.push(format!("C{criterion} {label}"));
        }
    }

    fn runtime(&mut self, criterion: u8, start: Instant, budget: Duration) {
        let t = start.elapsed();
        self.row(criterion, "runtime", t < budget, format!("{t:.1?} (budget {budget:?})"));
    }
}

fn cfg() -> SearchConfig {
    SearchConfig::default()
}

fn eps_of(row: &PublishedSuprema) -> f64 {
    parse_real(row.epsilon_text).unwrap()
}

fn levels(b: usize, fixed: &[(usize, f64)]) -> Vec<f64> {
    let used: f64 = fixed.iter().map(|f| f.1).sum();
    let share = (1.0 - used) / (b - fixed.len()) as f64;
    let mut x = vec![share; b];
    for &(i, v) in fixed {
        x[i] = v;
    }
    x
}

fn golden(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    while hi - lo > 1e-12 {
        let (a, c) = (hi - r * (hi - lo), lo + r * (hi - lo));
        if f(a) < f(c) {
            lo = a;
        } else {
            hi = c;
        }
    }
    let t = 0.5 * (lo + hi);
    (t, f(t))
}

/// Value of the kernel at the published attaining points, with free scalars
/// resolved by normalization and a one-dimensional search.
fn attaining_values(row: &PublishedSuprema) -> [f64; 4] {
    let (b, j, eps) = (row.b, row.j, eps_of(row));
    let psi = |p: &[f64], q: &[f64]| psi_generic(j, p, q);
    let u = vec![1.0 / b as f64; b];
    let uniform_off = |a: usize| levels(b, &[(a, 0.0)]);
    let vertex = |a: usize| levels(b, &[(a, 1.0)]);
    // q = (γ, δ, ..., δ) with γ = 1 - (b-1)δ, δ over the balanced range
    let two_level = |p: Vec<f64>| {
        golden(|d| psi(&p, &levels(b, &[(0, 1.0 - (b - 1) as f64 * d)])), eps, (1.0 - eps) / (b - 1) as f64).1
    };
    match (row.kind, b, row.k) {
        (PartitionKind::MaxBased, ..) => {
            let heavy = levels(b, &[(0, 1.0 - eps)]);
            let mut p4 = vec![eps / (b - 2) as f64; b];
            p4[0] = 1.0 - eps;
            p4[b - 1] = 0.0;
            let mut q4 = p4.clone();
            q4.reverse();
            [psi(&u, &u), psi(&vertex(0), &uniform_off(0)), psi(&heavy, &heavy), psi(&p4, &q4)]
        }
        (PartitionKind::MinBased, 6, 6) => {
            let low = levels(b, &[(0, eps)]);
            let p3 = levels(b, &[(0, eps), (1, 0.0)]);
            [psi(&u, &u), two_level(low), psi(&p3, &vertex(1)), psi(&vertex(0), &uniform_off(0))]
        }
        (PartitionKind::MinBased, ..) => {
            let low = levels(b, &[(0, eps)]);
            let p3 = levels(b, &[(0, eps), (b - 1, 0.0)]);
            let m3 = golden(|beta| psi(&p3, &levels(b, &[(0, eps), (b - 1, beta)])), 0.0, 1.0 - eps).1;
            // the published point for m2 fixes δ = ε at (5,5) and leaves it free at (6,5)
            let m2 = if b == 5 {
                psi(&uniform_off(0), &levels(b, &[(0, 1.0 - (b - 1) as f64 * eps)]))
            } else {
                two_level(uniform_off(0))
            };
            [two_level(low), m2, m3, m2]
        }
    }
}

fn criterion_1(t: &mut Tally) {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut exact = true;
    let mut cases = 0;
    for b in 2..=12i128 {
        for j in 1..b {
            let u = vec![Ratio::new(1i128, b); b as usize];
            let falling: i128 = (0..=j).map(|i| b - i).product();
            let expected = Ratio::new(2 * falling, b.pow(j as u32 + 1));
            exact &= psi_generic(j as usize, &u, &u) == expected;
            let ctx = KernelContext::new(b as usize, j as usize).unwrap();
            let ud = Distribution::uniform(b as usize);
            let f = psi_eval(&ctx, &ud, &ud).unwrap();
            let e = *expected.numer() as f64 / *expected.denom() as f64;
            worst = worst.max((f - e).abs() / e);
            cases += 1;
        }
    }
    t.row(
        1,
        "uniform closed form",
        exact && worst < 1e-14,
        format!("{cases} (b,j) pairs, rational equality {exact}, float rel. err {worst:.1e}"),
    );

    let mut rng = common::rng(1);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let b = rng.gen_range(2..=7);
        let j = rng.gen_range(1..=5.min(b - 1));
        let ctx = KernelContext::new(b, j).unwrap();
        let p = common::random_dist(b, &mut rng);
        let q = common::random_dist(b, &mut rng);
        let fast = psi_eval(&ctx, &p, &q).unwrap();
        let slow = psi_eval_naive(&ctx, &p, &q).unwrap();
        worst = worst.max((fast - slow).abs() / slow.abs().max(1e-300));
    }
    t.row(1, "recursion vs enumeration", worst < 1e-12, format!("1000 pairs, max rel. err {worst:.1e}"));
    t.runtime(1, start, Duration::from_secs(60));
}

fn matrices(kind: PartitionKind) -> Vec<(PublishedSuprema, ClusterMatrix)> {
    published_suprema()
        .into_iter()
        .filter(|r| r.kind == kind)
        .map(|r| {
            let cm = compute_cluster_matrix(r.kind, r.b, r.j, eps_of(&r), &cfg()).unwrap();
            (r, cm)
        })
        .collect()
}

fn criterion_2(t: &mut Tally) -> Vec<(PublishedSuprema, ClusterMatrix)> {
    let start = Instant::now();
    let out = matrices(PartitionKind::MaxBased);
    for (row, cm) in &out {
        let got = cm.values();
        let dev = got.iter().zip(row.m).map(|(g, p)| (g - p).abs()).fold(0.0, f64::max);
        t.row(
            2,
            &format!("({},{}) suprema", row.b, row.k),
            dev <= 1e-6,
            format!("computed {got:.7?} vs published {:?}, max |diff| {dev:.1e}", row.m),
        );
        let at = attaining_values(row);
        let dev = at.iter().zip(row.m).map(|(g, p)| (g - p).abs()).fold(0.0, f64::max);
        t.row(
            2,
            &format!("({},{}) attaining points", row.b, row.k),
            dev <= 1e-6,
            format!("{at:.7?}, max |diff| {dev:.1e}"),
        );
    }
    t.runtime(2, start, Duration::from_secs(600));
    out
}

fn criterion_3(t: &mut Tally) -> Vec<(PublishedSuprema, ClusterMatrix)> {
    let start = Instant::now();
    let out = matrices(PartitionKind::MinBased);
    for (row, cm) in &out {
        let got = cm.values();
        for (i, name) in ["m1", "m2", "m3", "m4"].iter().enumerate() {
            let (pass, rule) = if i == 2 {
                (got[i] <= row.m[i] + 1e-6, "<= published + 1e-6")
            } else {
                ((got[i] - row.m[i]).abs() <= 1e-5, "within 1e-5")
            };
            t.row(
                3,
                &format!("({},{}) {name}", row.b, row.k),
                pass,
                format!("computed {:.7} vs published {:.6} ({rule})", got[i], row.m[i]),
            );
        }
        let at = attaining_values(row);
        println!(
            "       info: ({},{}) kernel at published points {at:.7?}",
            row.b, row.k
        );
    }
    t.runtime(3, start, Duration::from_secs(600));
    out
}

fn criterion_4(t: &mut Tally, all: &[(PublishedSuprema, ClusterMatrix)]) {
    let start = Instant::now();
    for (row, cm) in all {
        let r = maximize_reduced_form(cm);
        let rel = (r.m - row.reduced_max).abs() / row.reduced_max;
        let printed = ClusterMatrix::from_values(row.kind, row.b, row.j, eps_of(row), row.m).unwrap();
        let from_printed = maximize_reduced_form(&printed).m;
        t.row(
            4,
            &format!("({},{}) reduced maximum", row.b, row.k),
            rel <= 1e-5,
            format!(
                "M = {:.7} vs {:.7} (rel {rel:.1e}); from published suprema {from_printed:.7}",
                r.m, row.reduced_max
            ),
        );
        if (row.b, row.k) == (6, 6) {
            let u = vec![Ratio::new(1i128, 6); 6];
            let rational = psi_generic(4, &u, &u) == Ratio::new(5, 27);
            let exact = rational && r.eta.balanced() == 1.0 && r.m == cm.m1 && (r.m - 5.0 / 27.0).abs() < 1e-15;
            t.row(
                4,
                "(6,6) all mass balanced",
                exact,
                format!("M = m1 = {:?}, eta0 = {}, m1 over the rationals = 5/27: {rational}", r.m, r.eta.balanced()),
            );
        }
    }
    t.runtime(4, start, Duration::from_secs(1));
}

fn criterion_5(t: &mut Tally) {
    let start = Instant::now();
    for row in CLUSTER_BOUNDS {
        let case = phash_bounds::reference::default_case(row.b, row.k).unwrap();
        let r = cluster_rate_bound(row.b, row.k, case.kind, Some(case.epsilon), None, &cfg()).unwrap();
        let d = unit_distance(r.value, row.cluster, 5);
        t.row(
            5,
            &format!("({},{}) clustered rate", row.b, row.k),
            d <= 1,
            format!("{:.7} -> {} vs {:.5} ({d} units)", r.value, format_up(r.value, 5), row.cluster),
        );
        if (row.b, row.k) == (6, 6) {
            let exact = Ratio::new(1i128, 1) / (Ratio::new(2, 1) / Ratio::new(5, 27) + Ratio::new(1, 1));
            let ok = exact == Ratio::new(5, 59) && (r.value - 5.0 / 59.0).abs() < 1e-15;
            t.row(5, "(6,6) equals 5/59", ok, format!("{:?} vs {:?}", r.value, 5.0 / 59.0));
        }
    }
    // informational: the same-cell supremum over the coordinate constraint alone
    let r = published_suprema().into_iter().find(|r| (r.b, r.k) == (5, 5)).unwrap();
    let cm = compute_cluster_matrix_with(r.kind, 5, 3, eps_of(&r), SameCellMode::Relaxed, &cfg()).unwrap();
    let rr = maximize_reduced_form(&cm);
    let rate = rate_bound_from_m(5, 5, 3, rr.m).unwrap().value;
    println!("       info: (5,5) relaxed same-cell set: m3 = {:.7}, M = {:.7}, rate = {rate:.7}", cm.m3, rr.m);
    t.runtime(5, start, Duration::from_secs(900));
}

fn criterion_6(t: &mut Tally) {
    let start = Instant::now();
    for row in KNOWN_BOUNDS {
        let km = km_bound(row.b, row.k, km_default_range(row.k)).unwrap();
        let km_j = km.params.j.unwrap();
        let d = unit_distance(km.value, row.korner_marton, 5);
        t.row(
            6,
            &format!("({},{}) Korner-Marton", row.b, row.k),
            d <= 1 && km_j == row.korner_marton_j,
            format!("{} (j={km_j}) vs {:.5} (j={}), {d} units", format_up(km.value, 5), row.korner_marton, row.korner_marton_j),
        );
        let dvj = dvj_bound(row.b, row.k).unwrap();
        let d = unit_distance(dvj.value, row.dvj, 5);
        t.row(
            6,
            &format!("({},{}) generalized j=2", row.b, row.k),
            d <= 1,
            format!("{} vs {:.5}, {d} units", format_up(dvj.value, 5), row.dvj),
        );
        let psi = psi_max_rate_bound(row.b, row.k, &cfg()).unwrap();
        let d = unit_distance(psi.value, row.psi_max, 5);
        t.row(
            6,
            &format!("({},{}) kernel maximum", row.b, row.k),
            d <= 50,
            format!("{} vs {:.5}, {d} units (tolerance 50)", format_up(psi.value, 5), row.psi_max),
        );
    }
    t.runtime(6, start, Duration::from_secs(1800));
}

fn criterion_7(t: &mut Tally, all: &[(PublishedSuprema, ClusterMatrix)]) {
    let start = Instant::now();
    for (row, cm) in all {
        let pairs = cell_pairs(row.kind, row.b, eps_of(row), SameCellMode::Strict).unwrap();
        let ctx = KernelContext::new(row.b, row.j).unwrap();
        // denominator 12 where the lattice is small enough, coarser above
        let d = match row.b {
            ..=6 => 12,
            7 => 8,
            8 => 7,
            9 => 6,
            _ => 5,
        };
        let ocfg = SearchConfig {
            oracle_denominator: d,
            ..cfg()
        };
        for (i, (rp, rq)) in pairs.iter().enumerate() {
            let o = oracle_scan(&ctx, rp, rq, &ocfg).unwrap();
            let sup = cm.values()[i];
            let below = o.value <= sup + 1e-6;
            let close = row.b > 6 || sup - o.value <= 5e-3;
            t.row(
                7,
                &format!("({},{}) m{} oracle", row.b, row.k, i + 1),
                below && close,
                format!("oracle {:.7} (D={d}) vs search {:.7}, gap {:.1e}", o.value, sup, sup - o.value),
            );
        }
    }
    t.runtime(7, start, Duration::from_secs(1200));
}

fn criterion_8(t: &mut Tally, all: &[(PublishedSuprema, ClusterMatrix)]) {
    let start = Instant::now();
    let mut rng = common::rng(8);

    let (mut sym, mut perm) = (0.0f64, 0.0f64);
    for _ in 0..2000 {
        let b = rng.gen_range(2..=10);
        let j = rng.gen_range(1..b);
        let ctx = KernelContext::new(b, j).unwrap();
        let (p, q) = (common::random_dist(b, &mut rng), common::random_dist(b, &mut rng));
        let v = psi_eval(&ctx, &p, &q).unwrap();
        let scale = v.abs().max(1e-300);
        sym = sym.max((v - psi_eval(&ctx, &q, &p).unwrap()).abs() / scale);
        let pi = common::random_perm(b, &mut rng);
        perm = perm.max((v - psi_eval(&ctx, &p.permuted(&pi), &q.permuted(&pi)).unwrap()).abs() / scale);
    }
    t.row(8, "kernel symmetry", sym < 1e-13, format!("2000 pairs, max rel. diff {sym:.1e}"));
    t.row(8, "permutation equivariance", perm < 1e-12, format!("2000 pairs, max rel. diff {perm:.1e}"));

    let mut worst = 0.0f64;
    for _ in 0..300 {
        let b = rng.gen_range(2..=11);
        let j = rng.gen_range(1..b);
        let ctx = KernelContext::new(b, j).unwrap();
        let (p, q) = (common::random_dist(b, &mut rng), common::random_dist(b, &mut rng));
        let (gp, _) = psi_gradient(&ctx, &p, &q).unwrap();
        let scale = gp.iter().fold(0.0f64, |m, g| m.max(g.abs())).max(1e-300);
        for (c, g) in gp.iter().enumerate() {
            let at = |h: f64| {
                let mut x = p.probs().to_vec();
                x[c] += h;
                psi_generic(j, &x, q.probs())
            };
            let fd = (at(1e-6) - at(-1e-6)) / 2e-6;
            worst = worst.max((fd - g).abs() / scale);
        }
    }
    t.row(8, "gradient vs finite differences", worst < 1e-5, format!("300 points, max rel. err {worst:.1e}"));

    let mut worst = 0.0f64;
    let mut matrices: Vec<([f64; 4], usize, PartitionKind)> =
        all.iter().map(|(r, cm)| (cm.values(), r.b, r.kind)).collect();
    for _ in 0..40 {
        let m = [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()];
        matrices.push((m, rng.gen_range(3..=11), PartitionKind::MaxBased));
    }
    for (m, b, kind) in matrices {
        let cm = ClusterMatrix::from_values(kind, b, 2, 0.01, m).unwrap();
        let r = maximize_reduced_form(&cm);
        let grid = common::reduced_form_grid(m, b, 200);
        worst = worst.max((r.m - grid).abs());
        assert!((reduced_form(m, r.eta.masses()) - r.m).abs() < 1e-12);
    }
    t.row(8, "reduced form vs grid", worst < 1e-8, format!("48 matrices, max |diff| {worst:.1e}"));

    let mut worst = f64::NEG_INFINITY;
    for _ in 0..300 {
        let b = rng.gen_range(3..=9);
        let kind = if rng.gen_bool(0.5) { PartitionKind::MaxBased } else { PartitionKind::MinBased };
        let eps = kind.epsilon_limit(b) * rng.gen_range(0.05..0.95);
        let region = Region::cell(kind, b, eps, rng.gen_range(0..=b)).unwrap();
        let y: Vec<f64> = (0..b).map(|_| rng.gen_range(-0.5..1.5)).collect();
        let x = region.project(&y).unwrap();
        for _ in 0..10 {
            let z = region.project(common::random_dist(b, &mut rng).probs()).unwrap();
            let ip: f64 = (0..b).map(|i| (y[i] - x.probs()[i]) * (z.probs()[i] - x.probs()[i])).sum();
            worst = worst.max(ip);
        }
    }
    t.row(8, "projection optimality", worst <= 1e-9, format!("300 projections, max <y-x, z-x> {worst:.1e}"));

    let mut bad = 0;
    let mut checked = 0;
    for kind in [PartitionKind::MaxBased, PartitionKind::MinBased] {
        for b in 3..=6 {
            let eps = kind.epsilon_limit(b) * 0.7;
            for p in grid_enumerate(b, 8) {
                let hits = (0..=b)
                    .filter(|&i| region_member(&p, &RegionSpec::new(kind, b, eps, i).unwrap()).unwrap())
                    .count();
                checked += 1;
                bad += usize::from(hits != 1);
            }
        }
    }
    t.row(8, "partition disjointness", bad == 0, format!("{checked} lattice points, {bad} not in exactly one cell"));

    let (mut mono_bad, mut relabel_bad) = (0, 0);
    for _ in 0..60 {
        let (b, n) = (rng.gen_range(3..=5), rng.gen_range(2..=4));
        let k = rng.gen_range(3..=b);
        let mut words: Vec<Vec<u8>> = (0..rng.gen_range(k..=12))
            .map(|_| (0..n).map(|_| rng.gen_range(1..=b as u8)).collect())
            .collect();
        words.sort();
        words.dedup();
        let code = Code::new(b, n, words).unwrap();
        let verdict = verify_hash_code(&code, k).unwrap();
        if verdict.holds() {
            let idx: Vec<usize> = (0..code.len()).filter(|_| rng.gen_bool(0.6)).collect();
            mono_bad += usize::from(!verify_hash_code(&code.subset(&idx), k).unwrap().holds());
        }
        let coords = common::random_perm(n, &mut rng);
        let relabel: Vec<Vec<u8>> = (0..n)
            .map(|_| common::random_perm(b, &mut rng).into_iter().map(|s| s as u8 + 1).collect())
            .collect();
        let moved = verify_hash_code(&code.transformed(&coords, &relabel), k).unwrap();
        relabel_bad += usize::from(moved.holds() != verdict.holds());
    }
    t.row(8, "hash verifier monotone under subsets", mono_bad == 0, format!("{mono_bad} violations in 60 codes"));
    t.row(8, "hash verifier relabeling invariance", relabel_bad == 0, format!("{relabel_bad} violations in 60 codes"));
    t.runtime(8, start, Duration::from_secs(300));
}

fn criterion_9(t: &mut Tally, all: &[(PublishedSuprema, ClusterMatrix)]) {
    let start = Instant::now();
    let mut increasing = true;
    for row in CLUSTER_BOUNDS {
        let j = row.k - 2;
        let mut prev = f64::NEG_INFINITY;
        for i in 1..=400 {
            let v = rate_bound_from_m(row.b, row.k, j, i as f64 * 0.005).unwrap().value;
            increasing &= v > prev;
            prev = v;
        }
    }
    t.row(9, "rate increasing in M", increasing, "400-point grids on every clustered case".into());
    for (row, cm) in all {
        let clustered = rate_bound_from_m(row.b, row.k, row.j, maximize_reduced_form(cm).m).unwrap().value;
        let psi = psi_max_rate_bound(row.b, row.k, &cfg()).unwrap().value;
        t.row(
            9,
            &format!("({},{}) clustered <= kernel maximum", row.b, row.k),
            clustered <= psi + 1e-6,
            format!("{clustered:.7} vs {psi:.7}"),
        );
    }
    t.runtime(9, start, Duration::from_secs(60));
}

fn main() {
    let mut t = Tally::default();
    criterion_1(&mut t);
    let mut all = criterion_2(&mut t);
    all.extend(criterion_3(&mut t));
    criterion_4(&mut t, &all);
    criterion_5(&mut t);
    criterion_6(&mut t);
    criterion_7(&mut t, &all);
    criterion_8(&mut t, &all);
    criterion_9(&mut t, &all);
    println!("\nacceptance: {} passed, {} failed", t.passed, t.failed.len());
    for f in &t.failed {
        println!("  failed: {f}");
    }
    if !t.failed.is_empty() {
        std::process::exit(1);
    }
}
