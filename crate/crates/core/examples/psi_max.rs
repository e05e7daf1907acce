//! Global maximum of the kernel by candidate points plus multistart ascent,
//! checked against a lattice scan.

use phash_bounds::optimize::{oracle_scan, psi_max_global, SearchConfig};
use phash_bounds::{KernelContext, Region};

fn main() -> phash_bounds::Result<()> {
    let cfg = SearchConfig {
        restarts: 64,
        ..SearchConfig::default()
    };
    for (b, j) in [(5, 3), (6, 4), (7, 5), (9, 6)] {
        let ctx = KernelContext::new(b, j)?;
        let w = psi_max_global(&ctx, &cfg)?;
        println!("b={b} j={j}: {:.7} via {:?}", w.value, w.method);
        println!("  p = {:.4?}\n  q = {:.4?}", w.p.probs(), w.q.probs());
    }

    let ctx = KernelContext::new(5, 3)?;
    let whole = Region::Simplex { b: 5 };
    let lattice = oracle_scan(&ctx, &whole, &whole, &SearchConfig { oracle_denominator: 10, ..cfg })?;
    println!("lattice scan b=5 j=3 D=10: {:.7}", lattice.value);
    Ok(())
}
