//! The commutation theorem for the crossed product at finite level.

use padic_opalg::charduals::TruncatedGroup;
use padic_opalg::crossed::{
    indicator_basis, verify_commutation_theorem, verify_operator_identities, CrossedModel,
};
use padic_opalg::padic::Field;

fn main() -> padic_opalg::Result<()> {
    for (p, l, k, j) in [(3, 2, 1, 1), (5, 2, 2, 2), (5, 2, 2, 1)] {
        let grp = TruncatedGroup::new(&Field::new(p, 64)?, l, k, j)?;
        let model = CrossedModel::new(&grp);
        println!("p={p} l={l} k={k} j={j} (free: {})", grp.is_free());
        for c in verify_operator_identities(&model, &indicator_basis(&grp))? {
            println!("  [{}] {}", if c.passed { "ok" } else { "FAIL" }, c.name);
        }
        let r = verify_commutation_theorem(&model)?;
        println!(
            "  dim R(I) = {}, dim R(J) = {}, dim I' = {}, dim J' = {}, center {}",
            r.dim_ri, r.dim_rj, r.dim_commutant_i, r.dim_commutant_j, r.dim_center
        );
        for c in &r.checks {
            println!("  [{}] {}", if c.passed { "ok" } else { "FAIL" }, c.name);
        }
        println!("  central pattern: {:?}", r.central);
    }
    Ok(())
}
