//! Unital subalgebras of `M_n(Q_p)`: spans, commutants and centers.

use crate::error::{Error, Result};
use crate::linalg::echelon::{nullspace, Subspace};
use crate::linalg::matrix::KMatrix;
use crate::padic::{Field, Padic};

/// Default ceiling on `n^2` for commutant solves.
pub const DEFAULT_AMBIENT_LIMIT: usize = 4096;

/// A unital subalgebra of `n x n` matrices, stored as a basis of concrete
/// matrices plus an echelon form of their span for membership tests.
#[derive(Clone, Debug)]
pub struct MatrixAlgebra {
    field: Field,
    n: usize,
    basis: Vec<KMatrix>,
    space: Subspace,
}

impl MatrixAlgebra {
    /// Checks that `basis` spans a unital algebra (identity present, all
    /// pairwise products inside the span). Dependent elements are dropped.
    pub fn new(field: &Field, n: usize, basis: Vec<KMatrix>) -> Result<MatrixAlgebra> {
        let alg = MatrixAlgebra::from_spanning(field, n, basis)?;
        if !alg.contains(&KMatrix::identity(field, n))? {
            return Err(Error::NotAnAlgebra("identity not in span".into()));
        }
        for (i, a) in alg.basis.iter().enumerate() {
            for (j, b) in alg.basis.iter().enumerate() {
                if !alg.contains(&(a * b))? {
                    return Err(Error::NotAnAlgebra(format!(
                        "product of basis elements {i} and {j} leaves the span"
                    )));
                }
            }
        }
        Ok(alg)
    }

    /// Keeps a linearly independent subfamily without checking closure.
    pub(crate) fn from_spanning(
        field: &Field,
        n: usize,
        spanning: Vec<KMatrix>,
    ) -> Result<MatrixAlgebra> {
        let mut space = Subspace::new(field, n * n);
        let mut basis = Vec::new();
        for m in spanning {
            check_shape(&m, n)?;
            if space.insert(m.entries())? {
                basis.push(m);
            }
        }
        Ok(MatrixAlgebra {
            field: field.clone(),
            n,
            basis,
            space,
        })
    }

    /// All of `M_n`, with the matrix units as basis.
    pub fn full(field: &Field, n: usize) -> MatrixAlgebra {
        let units = matrix_units(field, n);
        MatrixAlgebra::from_spanning(field, n, units).expect("matrix units are exact")
    }

    /// Scalar multiples of the identity.
    pub fn scalars(field: &Field, n: usize) -> MatrixAlgebra {
        MatrixAlgebra::from_spanning(field, n, vec![KMatrix::identity(field, n)])
            .expect("identity is exact")
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Size of the matrices.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[KMatrix] {
        &self.basis
    }

    pub fn subspace(&self) -> &Subspace {
        &self.space
    }

    pub fn contains(&self, m: &KMatrix) -> Result<bool> {
        check_shape(m, self.n)?;
        self.space.contains(m.entries())
    }

    pub fn contains_algebra(&self, other: &MatrixAlgebra) -> Result<bool> {
        self.space.contains_subspace(&other.space)
    }

    /// Span equality by containment both ways.
    pub fn same_span(&self, other: &MatrixAlgebra) -> Result<bool> {
        self.space.same_as(&other.space)
    }

    /// Whether every basis element commutes with every other.
    pub fn is_commutative(&self) -> Result<bool> {
        for (i, a) in self.basis.iter().enumerate() {
            for b in &self.basis[i + 1..] {
                if !a.commutator(b).is_zero_matrix()? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The algebra `T A T^-1`, given `T` and `T^-1`.
    pub fn conjugate(&self, t: &KMatrix, t_inv: &KMatrix) -> Result<MatrixAlgebra> {
        let conj = self.basis.iter().map(|b| &(t * b) * t_inv).collect();
        MatrixAlgebra::from_spanning(&self.field, self.n, conj)
    }
}

fn check_shape(m: &KMatrix, n: usize) -> Result<()> {
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "expected {n}x{n}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// `E_ij` for all `i, j`, row-major.
pub fn matrix_units(field: &Field, n: usize) -> Vec<KMatrix> {
    (0..n * n)
        .map(|idx| {
            let mut m = KMatrix::zeros(field, n, n);
            m.set(idx / n, idx % n, field.one());
            m
        })
        .collect()
}

/// Smallest unital subalgebra containing `generators`.
///
/// Words in the generators are grown from the identity by left
/// multiplication; a word is kept only if it enlarges the span, and the
/// search stops once no generator moves the span. The result is closed
/// because its span is a left ideal under every generator and contains `I`.
pub fn algebra_span(field: &Field, n: usize, generators: &[KMatrix]) -> Result<MatrixAlgebra> {
    for g in generators {
        check_shape(g, n)?;
    }
    let mut space = Subspace::new(field, n * n);
    let mut basis = Vec::new();
    let id = KMatrix::identity(field, n);
    space.insert(id.entries())?;
    basis.push(id);
    let mut frontier = 0;
    while frontier < basis.len() {
        let x = basis[frontier].clone();
        frontier += 1;
        for g in generators {
            let y = g * &x;
            if space.insert(y.entries())? {
                basis.push(y);
            }
        }
    }
    Ok(MatrixAlgebra {
        field: field.clone(),
        n,
        basis,
        space,
    })
}

/// `{X : XG = GX for all G in generators}` with the default size limit.
pub fn commutant(field: &Field, n: usize, generators: &[KMatrix]) -> Result<MatrixAlgebra> {
    commutant_with_limit(field, n, generators, DEFAULT_AMBIENT_LIMIT)
}

/// Commutant, refusing problems with more than `limit` unknowns.
///
/// The solution space is cut down one generator at a time: starting from
/// all matrix units, each step keeps the combinations of the current basis
/// whose commutator with the next generator vanishes.
pub fn commutant_with_limit(
    field: &Field,
    n: usize,
    generators: &[KMatrix],
    limit: usize,
) -> Result<MatrixAlgebra> {
    if n * n > limit {
        return Err(Error::BudgetExceeded(format!(
            "commutant in dimension {n} needs {} unknowns (limit {limit})",
            n * n
        )));
    }
    for g in generators {
        check_shape(g, n)?;
    }
    let mut basis = matrix_units(field, n);
    for g in generators {
        let images: Vec<KMatrix> = basis.iter().map(|b| b.commutator(g)).collect();
        basis = solve_combinations(field, &basis, &images)?;
        if basis.is_empty() {
            break;
        }
    }
    MatrixAlgebra::from_spanning(field, n, basis)
}

/// Combinations `sum c_i basis_i` with `sum c_i images_i = 0`.
fn solve_combinations(
    field: &Field,
    basis: &[KMatrix],
    images: &[KMatrix],
) -> Result<Vec<KMatrix>> {
    let d = basis.len();
    let len = images.first().map_or(0, |m| m.entries().len());
    // rows that vanish for every unknown carry no constraint
    let live: Vec<usize> = (0..len)
        .filter(|&r| images.iter().any(|m| !m.entries()[r].is_zero()))
        .collect();
    if live.is_empty() {
        return Ok(basis.to_vec());
    }
    let system = KMatrix::from_fn(field, live.len(), d, |r, c| {
        images[c].entries()[live[r]].clone()
    });
    nullspace(&system)?
        .into_iter()
        .map(|coeffs| Ok(combine(field, basis, &coeffs)))
        .collect()
}

pub(crate) fn combine(field: &Field, basis: &[KMatrix], coeffs: &[Padic]) -> KMatrix {
    let n = basis[0].rows();
    let mut acc = KMatrix::zeros(field, n, basis[0].cols());
    for (c, b) in coeffs.iter().zip(basis) {
        if c.is_zero() {
            continue;
        }
        acc = &acc + &b.scale(c);
    }
    acc
}

/// `{X in alg : XY = YX for all Y in alg}`.
pub fn center(alg: &MatrixAlgebra) -> Result<MatrixAlgebra> {
    let basis = alg.basis();
    let mut result = basis.to_vec();
    for y in basis {
        let images: Vec<KMatrix> = result.iter().map(|b| b.commutator(y)).collect();
        result = solve_combinations(alg.field(), &result, &images)?;
    }
    MatrixAlgebra::from_spanning(alg.field(), alg.n(), result)
}
