#![allow(dead_code)]

use phash_bounds::cluster::reduced_form;
use phash_bounds::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixed_seed(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases,
        rng_seed: proptest::test_runner::RngSeed::Fixed(0x9e37_79b9),
        failure_persistence: None,
        ..proptest::test_runner::Config::default()
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random distribution; about a third have some zero entries.
pub fn random_dist(b: usize, rng: &mut ChaCha8Rng) -> Distribution {
    let sparse = rng.gen_bool(0.3);
    let mut w: Vec<f64> = (0..b)
        .map(|_| if sparse && rng.gen_bool(0.4) { 0.0 } else { rng.gen::<f64>() + 1e-3 })
        .collect();
    if w.iter().all(|&x| x == 0.0) {
        w[0] = 1.0;
    }
    Distribution::from_weights(&w).unwrap()
}

pub fn random_perm(b: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..b).collect();
    for i in (1..b).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    perm
}

/// Brute-force maximum of the reduced form: cluster masses `(η0, η1, rest)`
/// with `rest` spread evenly over the other `b-1` cells, searched on a grid
/// of denominator `d` and then on successively finer grids around the best point.
pub fn reduced_form_grid(m: [f64; 4], b: usize, d: usize) -> f64 {
    let eval = |e0: f64, e1: f64| -> f64 {
        let rest = (1.0 - e0 - e1).max(0.0);
        let mut eta = vec![e0, e1];
        eta.extend(std::iter::repeat(rest / (b - 1) as f64).take(b - 1));
        reduced_form(m, &eta)
    };
    let mut best = (0.0, 0.0, f64::NEG_INFINITY);
    for i in 0..=d {
        for j in 0..=d - i {
            let (e0, e1) = (i as f64 / d as f64, j as f64 / d as f64);
            let v = eval(e0, e1);
            if v > best.2 {
                best = (e0, e1, v);
            }
        }
    }
    let mut h = 1.0 / d as f64;
    for _ in 0..40 {
        let (c0, c1) = (best.0, best.1);
        for a in -10..=10 {
            for c in -10..=10 {
                let e0 = c0 + a as f64 * h / 10.0;
                let e1 = c1 + c as f64 * h / 10.0;
                if e0 < 0.0 || e1 < 0.0 || e0 + e1 > 1.0 {
                    continue;
                }
                let v = eval(e0, e1);
                if v > best.2 {
                    best = (e0, e1, v);
                }
            }
        }
        h /= 5.0;
    }
    best.2
}
