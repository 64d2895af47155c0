use thiserror::Error;

/// Errors raised anywhere in the crate.
///
/// Variants map one-to-one onto the failure modes the individual modules
/// document; callers usually match on `PrecisionLoss` to decide whether a
/// rerun at higher precision makes sense.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("no root of unity of order {m} in Q_{p}: {m} does not divide {p} - 1")]
    BadOrder { p: u64, m: u64 },
    #[error("element is not integral (valuation {0})")]
    NotIntegral(i64),
    #[error("vector {index} does not have unit sup-norm")]
    NotUnitNorm { index: usize },
    #[error("operator is not diagonalizable with the supplied eigenvalues: {0}")]
    NotDiagonalizable(String),
    #[error("eigenvalue list contains a repeated value at position {0}")]
    RepeatedEigenvalue(usize),
    #[error("function has no value at eigenvalue {0}")]
    MissingValue(String),
    #[error("operators {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("character index {0} is not in the dual stabilizer subgroup")]
    IndexNotInG0(usize),
    #[error("no subgroup satisfies the weight condition")]
    NoValidSubgroup,
    #[error("matrix is not in the closed unit ball (norm exponent {0})")]
    NotInUnitBall(i64),
    #[error("lattice repair did not converge after {0} iterations")]
    NonConvergent(usize),
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("coefficient b[{0}][{1}] lies outside the admissible support")]
    SupportViolation(usize, usize),
    #[error("not a unital algebra: {0}")]
    NotAnAlgebra(String),
    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
