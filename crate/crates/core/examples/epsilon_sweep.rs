//! Clustered bound as a function of the threshold.

use phash_bounds::cluster::epsilon_sweep;
use phash_bounds::optimize::SearchConfig;
use phash_bounds::PartitionKind;

fn main() -> phash_bounds::Result<()> {
    let cfg = SearchConfig {
        restarts: 48,
        ..SearchConfig::default()
    };
    let grid: Vec<f64> = (5..=13).map(|i| i as f64 / 100.0).collect();
    let (reports, best) = epsilon_sweep(7, 7, PartitionKind::MaxBased, None, &grid, &cfg)?;
    for (e, r) in grid.iter().zip(&reports) {
        println!("eps = {e:.2}: {:.7}", r.value);
    }
    if let Some(i) = best {
        println!("smallest at eps = {:.2}", grid[i]);
    }
    Ok(())
}
