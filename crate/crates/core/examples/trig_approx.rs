//! Approximating a function on the dual group by a trigonometric polynomial
//! in a weighted sup norm.

use padic_opalg::charduals::{rational, trig_poly_approx, TruncatedGroup, WeightedSupNorm};
use padic_opalg::padic::{Field, Padic};

fn main() -> padic_opalg::Result<()> {
    let f = Field::new(17, 32)?;
    let grp = TruncatedGroup::new(&f, 2, 3, 3)?;
    let func: Vec<Padic> = (0..grp.order())
        .map(|i| f.ratio(i as i64 * i as i64 + 1, 17))
        .collect();
    // weights shrink away from the deep subgroups
    let gamma = (0..grp.order())
        .map(|i| match i {
            0 => rational(1, 1),
            4 => rational(1, 10),
            2 | 6 => rational(1, 100),
            _ => rational(1, 10_000),
        })
        .collect();
    let w = WeightedSupNorm::new(gamma)?;
    for (n, d) in [(10, 1), (1, 1), (1, 10), (1, 1000)] {
        let eps = rational(n, d);
        let approx = trig_poly_approx(&grp, &func, &w, &eps)?;
        println!(
            "eps = {eps}: subgroup {:?}, {} terms, exact on subgroup {}, error {}",
            approx.subgroup,
            approx.coeffs.len(),
            approx.exact_on_subgroup,
            approx.error
        );
    }
    Ok(())
}
