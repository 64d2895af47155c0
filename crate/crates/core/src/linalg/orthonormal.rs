use crate::error::{Error, Result};
use crate::fp::FpMatrix;
use crate::linalg::matrix::{sup_norm, NormExponent};
use crate::padic::Padic;

/// Residue-field image of an integral vector.
pub fn reduce_vector(v: &[Padic]) -> Result<Vec<u64>> {
    v.iter().map(|x| Ok(x.reduce_residue()?.value())).collect()
}

/// A family of unit vectors in `c_0` is orthonormal exactly when their
/// reductions mod `p` are linearly independent.
pub fn is_orthonormal(vectors: &[Vec<Padic>]) -> Result<bool> {
    let Some(first) = vectors.first() else {
        return Ok(true);
    };
    let Some(x0) = first.first() else {
        return Ok(true);
    };
    let p = x0.p();
    let len = first.len();
    let mut rows = Vec::with_capacity(vectors.len() * len);
    for (index, v) in vectors.iter().enumerate() {
        if v.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "vector {index} has length {}, expected {len}",
                v.len()
            )));
        }
        if sup_norm(v)? != NormExponent::UNIT {
            return Err(Error::NotUnitNorm { index });
        }
        rows.extend(reduce_vector(v)?);
    }
    let m = FpMatrix::new(p, vectors.len(), len, rows);
    Ok(m.rank() == vectors.len())
}
