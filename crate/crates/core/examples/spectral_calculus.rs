//! Spectral projections, functional calculus and a joint spectral measure.

use padic_opalg::linalg::KMatrix;
use padic_opalg::padic::{Field, Padic};
use padic_opalg::spectral::{
    functional_calculus, is_orthoprojection, joint_calculus, joint_spectral_measure,
    spectral_projections,
};

fn main() -> padic_opalg::Result<()> {
    let f = Field::new(7, 64)?;
    let q = KMatrix::from_ints(&f, &[&[1, 2, 0], &[0, 1, 3], &[1, 0, 2]]);
    let d = KMatrix::diag(&f, &[f.int(2), f.ratio(1, 7), f.int(2)]);
    let a = &(&q * &d) * &q.inverse()?;
    let data = spectral_projections(&a, &[f.int(2), f.ratio(1, 7)])?;
    for (l, e) in data.eigenvalues.iter().zip(&data.projections) {
        println!("E_{l} (orthoprojection: {}):\n{e}", is_orthoprojection(e)?);
    }
    println!("A = sum l E_l: {}", data.reconstruct().same_as(&a)?);

    // phi(t) = 1/t on the spectrum gives the inverse
    let inv = functional_calculus(&data, |l: &Padic| l.inv().ok())?;
    println!("phi(A) = A^-1: {}", (&inv * &a).is_identity()?);

    // two commuting diagonal operators and their joint cells
    let a1 = KMatrix::diag(&f, &[f.int(1), f.int(1), f.int(0)]);
    let a2 = KMatrix::diag(&f, &[f.int(3), f.int(5), f.int(5)]);
    let cells = joint_spectral_measure(&[
        (a1, vec![f.int(0), f.int(1)]),
        (a2, vec![f.int(3), f.int(5)]),
    ])?;
    for c in &cells {
        println!(
            "cell {:?}: idempotent {}",
            c.eigenvalues,
            c.projection.is_idempotent()?
        );
    }
    let sum = joint_calculus(&cells, |v| &v[0] + &v[1]).expect("nonempty");
    println!("f(x, y) = x + y:\n{sum}");
    Ok(())
}
