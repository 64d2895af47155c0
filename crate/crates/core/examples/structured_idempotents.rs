//! Elements of the commutant given by coefficient matrices: idempotents and
//! orthoprojections decided from the coefficients alone.

use padic_opalg::charduals::TruncatedGroup;
use padic_opalg::crossed::{
    idempotent_check, idempotent_check_matrix, CrossedModel, StructuredCommutantElement,
};
use padic_opalg::padic::Field;

fn main() -> padic_opalg::Result<()> {
    let f = Field::new(5, 64)?;
    let model = CrossedModel::new(&TruncatedGroup::new(&f, 2, 1, 1)?);
    let cases = [
        (
            "E_00",
            vec![vec![f.one(), f.zero()], vec![f.zero(), f.zero()]],
        ),
        (
            "[[1, 1/5], [0, 0]]",
            vec![vec![f.one(), f.ratio(1, 5)], vec![f.zero(), f.zero()]],
        ),
        ("[[1/2, 1/2], [1/2, 1/2]]", vec![vec![f.ratio(1, 2); 2]; 2]),
        (
            "[[1, 1], [0, 1]]",
            vec![vec![f.one(), f.one()], vec![f.zero(), f.one()]],
        ),
    ];
    for (name, b) in cases {
        let e = StructuredCommutantElement::new(&model, b)?;
        let coeff = idempotent_check(&e, &f)?;
        let matrix = idempotent_check_matrix(&model, &e)?;
        println!(
            "{name:24} idempotent {:5} orthoprojection {:5} (operator-level agrees: {})",
            coeff.idempotent,
            coeff.orthoprojection,
            coeff == matrix
        );
    }
    Ok(())
}
