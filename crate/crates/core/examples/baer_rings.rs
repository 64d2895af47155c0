//! Baer checks and type classification for small algebras over F_p,
//! including one read from JSON.

use padic_opalg::fp::FpMatrix;
use padic_opalg::io::algebra_from_json;
use padic_opalg::reduction::{classify_type, left_annihilator, BaerOptions, FiniteAlgebra};

fn show(name: &str, alg: &FiniteAlgebra) -> padic_opalg::Result<()> {
    let r = classify_type(alg, &BaerOptions::default())?;
    println!(
        "{name:22} dim {:2}  baer {:5} ({:?}, {} annihilators)  type {:?}",
        alg.dim(),
        r.is_baer,
        r.mode,
        r.annihilators_checked,
        r.verdict
    );
    if let Some(w) = &r.witness {
        println!("{:24}witness {:?}", "", w);
    }
    if let Some(fail) = &r.failing {
        println!(
            "{:24}annihilator without idempotent generator: {:?}",
            "", fail.annihilator
        );
    }
    Ok(())
}

fn main() -> padic_opalg::Result<()> {
    let m2 = FiniteAlgebra::full(3, 2);
    let e11 = FpMatrix::unit(3, 2, 0, 0);
    println!("l(E_11) in M_2(F_3): {:?}", left_annihilator(&m2, &[e11]));
    show("M_2(F_3)", &m2)?;
    show("M_2(F_3) + M_2(F_3)", &m2.direct_sum(&m2))?;
    show("F_5 x F_5", &FiniteAlgebra::product_of_fields(5, 2))?;
    show("F_3[x]/(x^2)", &FiniteAlgebra::truncated_polynomials(3, 2))?;
    show("M_3(F_5)", &FiniteAlgebra::full(5, 3))?;
    let json = serde_json::json!({
        "p": 2,
        "basis": [[[1, 0, 0], [0, 1, 0], [0, 0, 1]], [[0, 1, 0], [0, 0, 0], [0, 0, 0]], [[0, 0, 0], [0, 0, 0], [0, 0, 1]]]
    });
    show("algebra from JSON", &algebra_from_json(&json)?)?;
    Ok(())
}
