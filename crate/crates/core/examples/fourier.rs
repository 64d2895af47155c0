//! Characters of Z/l^k with values in Q_p, Haar integration and the
//! Fourier transform on S x G.

use padic_opalg::charduals::{fourier_analyze, fourier_synthesize, haar_integrate, TruncatedGroup};
use padic_opalg::linalg::sup_norm;
use padic_opalg::padic::{Field, Padic};

fn main() -> padic_opalg::Result<()> {
    let f = Field::new(5, 32)?;
    let grp = TruncatedGroup::new(&f, 2, 2, 1)?;
    println!(
        "|G| = {}, |S| = {}, free action: {}",
        grp.order(),
        grp.s_order(),
        grp.is_free()
    );
    for n in 0..grp.order() {
        let row: Vec<String> = (0..grp.order())
            .map(|a| grp.character(n, a).to_string())
            .collect();
        println!("g_{n}: {}", row.join(" | "));
    }
    let g = grp.order();
    for n in 0..g {
        let gram: Vec<String> = (0..g)
            .map(|m| {
                let prod: Vec<Padic> = (0..g)
                    .map(|a| grp.character(n, a) * grp.character(m, grp.neg(a)))
                    .collect();
                haar_integrate(&grp, &prod).to_string()
            })
            .collect();
        println!("<g_{n}, g_m> = {}", gram.join(" "));
    }

    let func: Vec<Vec<Padic>> = (0..grp.s_order())
        .map(|x| {
            (0..g)
                .map(|a| f.ratio((x * g + a) as i64 + 1, 25))
                .collect()
        })
        .collect();
    let phi = fourier_analyze(&grp, &func);
    let back = fourier_synthesize(&grp, &phi);
    let exact = func
        .iter()
        .flatten()
        .zip(back.iter().flatten())
        .all(|(x, y)| x.same_as(y).unwrap());
    println!("round trip exact: {exact}");
    println!(
        "||F|| = {}, max ||phi_n|| = {}",
        sup_norm(func.iter().flatten())?,
        sup_norm(phi.iter().flatten())?
    );
    Ok(())
}
