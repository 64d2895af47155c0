//! Reduces the unit ball of R(J) modulo p and classifies the result as a
//! Baer ring, for a free and a non-free action.

use padic_opalg::charduals::TruncatedGroup;
use padic_opalg::crossed::CrossedModel;
use padic_opalg::padic::Field;
use padic_opalg::reduction::{verify_crossed_reduction, BaerOptions};

fn main() -> padic_opalg::Result<()> {
    for (p, l, k, j) in [(3, 2, 1, 1), (5, 2, 2, 2), (5, 2, 2, 1)] {
        let field = Field::new(p, 64)?;
        let grp = TruncatedGroup::new(&field, l, k, j)?;
        let model = CrossedModel::new(&grp);
        let start = std::time::Instant::now();
        let report = verify_crossed_reduction(&model, &BaerOptions::default())?;
        println!(
            "p={p} l={l} k={k} j={j}: dim R(J) = {}, reduced dim = {}, coset blocks {:?}, repairs {}",
            report.dim_algebra, report.dim_reduced, report.coset_blocks, report.lattice_repairs
        );
        for c in &report.checks {
            println!("  [{}] {}", if c.passed { "ok" } else { "FAIL" }, c.name);
        }
        println!(
            "  baer: {} ({:?}, {} annihilators), type {:?}",
            report.baer.is_baer,
            report.baer.mode,
            report.baer.annihilators_checked,
            report.baer.verdict
        );
        if let Some(w) = &report.baer.witness {
            println!("  witness {:?}", w);
        }
        println!("  {:.2?}", start.elapsed());
    }
    Ok(())
}
