//! Clustered bound for every tabulated case: cell suprema, reduced-form
//! maximum and the resulting rate.

use phash_bounds::cluster::{compute_cluster_matrix, maximize_reduced_form, report_from_matrix, SameCellMode};
use phash_bounds::optimize::SearchConfig;
use phash_bounds::reference::cluster_cases;

fn main() -> phash_bounds::Result<()> {
    let cfg = SearchConfig::default();
    for case in cluster_cases() {
        let cm = compute_cluster_matrix(case.kind, case.b, case.k - 2, case.epsilon, &cfg)?;
        let reduced = maximize_reduced_form(&cm);
        let report = report_from_matrix(case.k, &cm, SameCellMode::Strict)?;
        println!(
            "({},{}) {:?} eps={}: m = [{:.7}, {:.7}, {:.7}, {:.7}]  M = {:.7} (eta0 {:.4})  rate <= {:.7}",
            case.b,
            case.k,
            case.kind,
            case.epsilon_text,
            cm.m1,
            cm.m2,
            cm.m3,
            cm.m4,
            reduced.m,
            reduced.eta.balanced(),
            report.value
        );
    }
    Ok(())
}
