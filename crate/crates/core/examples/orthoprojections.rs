//! Idempotents that are, and are not, orthoprojections.

use padic_opalg::linalg::KMatrix;
use padic_opalg::padic::Field;
use padic_opalg::spectral::{check_orthogonal_sum, is_orthoprojection, sample_pairs};
use padic_opalg::suite::random_orthoprojection;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> padic_opalg::Result<()> {
    let f = Field::new(5, 64)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let p = random_orthoprojection(&f, &mut rng, 3)?;
    println!("P = Q D Q^-1 with Q in GL_3(Z_5):\n{p}");
    println!("orthoprojection: {}", is_orthoprojection(&p)?);
    let pairs = sample_pairs(&f, &mut rng, 50);
    println!(
        "||aP + b(I - P)|| = max(|a|, |b|) on 50 pairs: {}",
        check_orthogonal_sum(&p, &pairs)?.is_none()
    );

    let skew = KMatrix::from_rows(
        &f,
        vec![vec![f.one(), f.ratio(1, 5)], vec![f.zero(), f.zero()]],
    );
    println!(
        "\nP = [[1, 1/5], [0, 0]]: idempotent {}",
        skew.is_idempotent()?
    );
    println!("||P|| = {}", skew.norm()?);
    println!("orthoprojection: {}", is_orthoprojection(&skew)?);
    if let Some((a, b)) = check_orthogonal_sum(&skew, &sample_pairs(&f, &mut rng, 10))? {
        println!("norm identity fails at a = {a}, b = {b}");
    }
    Ok(())
}
