//! Recomputes both comparison tables and flags disagreements with the
//! published values.

use phash_bounds::optimize::SearchConfig;
use phash_bounds::render::{Manifest, OutputFormat};
use phash_bounds::tables::{cluster_bounds_table, known_bounds_table};

fn main() -> phash_bounds::Result<()> {
    let cfg = SearchConfig::default();
    let manifest = Manifest::new("tables", vec![], &cfg, 5);
    for table in [known_bounds_table(&cfg)?, cluster_bounds_table(&cfg)?] {
        print!("{}", table.render(OutputFormat::Markdown, 5, &manifest));
        println!("flagged cells: {}\n", table.mismatches());
    }
    Ok(())
}
