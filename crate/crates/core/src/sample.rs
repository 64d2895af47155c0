//! Random scalars and matrices for property checks and scans.

use rand::Rng;

use crate::fp::FpMatrix;
use crate::linalg::KMatrix;
use crate::padic::{Field, Padic};

/// Integer in `1..p^2` not divisible by `p`, with random sign.
pub fn random_unit<R: Rng + ?Sized>(field: &Field, rng: &mut R) -> Padic {
    let p = field.p() as i64;
    loop {
        let u = rng.gen_range(1..p * p);
        if u % p != 0 {
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            return field.int(sign * u);
        }
    }
}

/// `p^v * u` with `v` uniform in `vmin..=vmax` and `u` a random unit.
pub fn random_scalar<R: Rng + ?Sized>(field: &Field, rng: &mut R, vmin: i64, vmax: i64) -> Padic {
    let v = rng.gen_range(vmin..=vmax);
    random_unit(field, rng).shift(v)
}

/// Like [`random_scalar`] but zero with probability `zero_prob`.
pub fn random_scalar_or_zero<R: Rng + ?Sized>(
    field: &Field,
    rng: &mut R,
    vmin: i64,
    vmax: i64,
    zero_prob: f64,
) -> Padic {
    if rng.gen_bool(zero_prob) {
        field.zero()
    } else {
        random_scalar(field, rng, vmin, vmax)
    }
}

/// Matrix with entries in `0..p^2`: an element of the closed unit ball.
pub fn random_integral_matrix<R: Rng + ?Sized>(field: &Field, rng: &mut R, n: usize) -> KMatrix {
    let bound = (field.p() * field.p()) as i64;
    KMatrix::from_fn(field, n, n, |_, _| field.int(rng.gen_range(0..bound)))
}

/// Element of `GL_n(Z_p)`: integral with invertible reduction, so both it
/// and its inverse have norm one.
pub fn random_gl<R: Rng + ?Sized>(field: &Field, rng: &mut R, n: usize) -> KMatrix {
    let p = field.p();
    loop {
        let q = random_integral_matrix(field, rng, n);
        let red = FpMatrix::from_fn(p, n, n, |i, j| {
            q.get(i, j).reduce_residue().expect("integral").value()
        });
        if red.rank() == n {
            return q;
        }
    }
}
