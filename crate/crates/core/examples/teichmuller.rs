//! Roots of unity in Q_p, capped precision and the tri-state zero.

use padic_opalg::padic::{check_root_order, teichmuller_root, Field};
use padic_opalg::Error;

fn main() -> padic_opalg::Result<()> {
    let f = Field::new(17, 12)?;
    for m in [2, 4, 8, 16] {
        let zeta = teichmuller_root(&f, m)?;
        println!(
            "order {m:2}: {zeta}  (order check {})",
            check_root_order(&zeta, m)
        );
    }
    match teichmuller_root(&f, 3) {
        Err(Error::BadOrder { p, m }) => println!("no root of order {m} in Q_{p}"),
        other => println!("unexpected: {other:?}"),
    }

    // exact rationals mix with capped values
    let zeta = teichmuller_root(&f, 4)?;
    let x = &f.ratio(3, 17) * &zeta;
    println!("3/17 * zeta = {x}, valuation {}", x.valuation()?);

    // all tracked digits cancel: the result is known only modulo p^N
    let gone = &(&zeta * &zeta) + &f.one();
    println!("zeta^2 + 1 = {gone}");
    println!("negligible at scale p^0: {:?}", gone.is_negligible(0));
    println!("valuation: {:?}", gone.valuation());
    Ok(())
}
