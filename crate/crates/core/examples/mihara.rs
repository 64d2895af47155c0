//! A matrix of norm one with `||A^2|| = ||A||^2` for which the norm identity
//! `||q(A)^2|| = ||q(A)||^2` still fails, for `q(t) = (t - 1)(t - p)`.

use padic_opalg::padic::Field;
use padic_opalg::spectral::{check_norm_identity, normality_scan, ScanSpec};
use padic_opalg::suite::{mihara_matrix, mihara_polynomial};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> padic_opalg::Result<()> {
    for p in [3, 5, 17] {
        let f = Field::new(p, 64)?;
        let a = mihara_matrix(&f);
        let q = mihara_polynomial(&f);
        let qa = q.eval_matrix(&a);
        println!("p = {p}");
        println!("  ||A|| = {}, ||A^2|| = {}", a.norm()?, (&a * &a).norm()?);
        println!("  q(t) = {q}");
        println!(
            "  ||q(A)|| = {}, q(A)^2 = 0: {}",
            qa.norm()?,
            (&qa * &qa).is_zero_matrix()?
        );
        let v = check_norm_identity(&a, &q)?;
        println!(
            "  identity holds: {} (lhs {}, rhs {})",
            v.holds, v.lhs, v.rhs
        );
    }

    // the scan finds the same kind of witness on its own
    let f = Field::new(5, 64)?;
    let a = mihara_matrix(&f);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let violations = normality_scan(&a, &ScanSpec::new(3), &mut rng)?;
    println!("scan up to degree 3: {} violations", violations.len());
    if let Some(v) = violations.first() {
        println!("  first: {}", v.polynomial);
    }
    Ok(())
}
