//! Finite-dimensional linear algebra over `Q_p`.

pub mod algebra;
pub mod echelon;
pub mod matrix;
pub mod orthonormal;

pub use algebra::{algebra_span, center, commutant, commutant_with_limit, MatrixAlgebra};
pub use echelon::{nullspace, rank, rref, Rref, Subspace};
pub use matrix::{sup_norm, sup_norm_bound, KMatrix, NormBound, NormExponent};
pub use orthonormal::is_orthonormal;
