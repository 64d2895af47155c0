//! Normality tests, spectral decompositions and orthoprojections for
//! matrices over `Q_p`.
//!
//! Eigenvalues are always supplied by the caller; this module checks that
//! they annihilate the operator and builds the projections from them.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{KMatrix, NormBound, NormExponent};
use crate::padic::{Field, Padic, Valuation};
use crate::sample::random_scalar;

/// Polynomial with coefficients in `Q_p`, lowest degree first.
#[derive(Clone, PartialEq)]
pub struct PolynomialOverK {
    coeffs: Vec<Padic>,
}

impl PolynomialOverK {
    pub fn new(coeffs: Vec<Padic>) -> PolynomialOverK {
        assert!(!coeffs.is_empty(), "polynomial needs a field");
        PolynomialOverK { coeffs }
    }

    /// The polynomial `t`.
    pub fn identity(field: &Field) -> PolynomialOverK {
        PolynomialOverK::new(vec![field.zero(), field.one()])
    }

    /// `prod (t - r)` over `roots`.
    pub fn from_roots(field: &Field, roots: &[Padic]) -> PolynomialOverK {
        let mut coeffs = vec![field.one()];
        for r in roots {
            let mut next = vec![field.zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] = &next[i + 1] + c;
                next[i] = &next[i] - &(c * r);
            }
            coeffs = next;
        }
        PolynomialOverK::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Padic] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &Padic) -> Padic {
        let mut acc = x.field().zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `q(A)` by Horner's rule.
    pub fn eval_matrix(&self, a: &KMatrix) -> KMatrix {
        let n = a.rows();
        let field = a.field();
        let mut acc = KMatrix::zeros(field, n, n);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * a) + &KMatrix::identity(field, n).scale(c);
        }
        acc
    }
}

impl fmt::Display for PolynomialOverK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})t"),
                _ => format!("({c})t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for PolynomialOverK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Outcome of comparing `||q(A)^2||` with `||q(A)||^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NormVerdict {
    pub holds: bool,
    /// Exponent of `||q(A)^2||`; a lower bound when `lhs_is_bound`.
    pub lhs: NormExponent,
    /// Exponent of `||q(A)||^2`.
    pub rhs: NormExponent,
    pub lhs_is_bound: bool,
}

pub fn check_norm_identity(a: &KMatrix, q: &PolynomialOverK) -> Result<NormVerdict> {
    let b = q.eval_matrix(a);
    let rhs = b.norm()?.times(b.norm()?);
    let b2 = &b * &b;
    match b2.norm_bound() {
        NormBound::Exact(lhs) => Ok(NormVerdict {
            holds: lhs == rhs,
            lhs,
            rhs,
            lhs_is_bound: false,
        }),
        NormBound::AtLeast(lb) => {
            // only certifiable if the bound already rules out equality
            let certified_smaller = match rhs.0 {
                Valuation::Finite(r) => lb > r,
                Valuation::Infinite => false,
            };
            if certified_smaller {
                Ok(NormVerdict {
                    holds: false,
                    lhs: NormExponent::finite(lb),
                    rhs,
                    lhs_is_bound: true,
                })
            } else {
                Err(Error::PrecisionLoss(format!(
                    "||q(A)^2|| only bounded by p^({}) while ||q(A)||^2 = {rhs}",
                    -lb
                )))
            }
        }
    }
}

/// Which polynomials [`normality_scan`] tries.
#[derive(Clone, Debug)]
pub struct ScanSpec {
    pub degree_bound: usize,
    /// Root candidates; defaults to the distinct diagonal entries.
    pub candidates: Option<Vec<Padic>>,
    /// Random monic polynomials per degree, coefficients of valuation in `[-2, 2]`.
    pub random_per_degree: usize,
}

impl ScanSpec {
    pub fn new(degree_bound: usize) -> ScanSpec {
        ScanSpec {
            degree_bound,
            candidates: None,
            random_per_degree: 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub polynomial: PolynomialOverK,
    pub verdict: NormVerdict,
}

/// Distinct values in order of first appearance.
pub fn distinct(values: &[Padic]) -> Result<Vec<Padic>> {
    let mut out: Vec<Padic> = Vec::new();
    for v in values {
        let mut seen = false;
        for o in &out {
            if o.same_as(v)? {
                seen = true;
                break;
            }
        }
        if !seen {
            out.push(v.clone());
        }
    }
    Ok(out)
}

/// Multisets of size `k` from `0..m`, as non-decreasing index lists.
fn multisets(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in multisets(m, k - 1) {
        let start = rest.last().copied().unwrap_or(0);
        for i in start..m {
            let mut v = rest.clone();
            v.push(i);
            out.push(v);
        }
    }
    out
}

/// Searches a finite family of polynomials for violations of
/// `||q(A)^2|| = ||q(A)||^2`.
///
/// The family is every monic polynomial whose roots are drawn (with
/// repetition) from the candidates, up to `degree_bound`, plus random monic
/// polynomials. An empty result means no violation was found, not that `A`
/// is normal.
pub fn normality_scan<R: Rng + ?Sized>(
    a: &KMatrix,
    spec: &ScanSpec,
    rng: &mut R,
) -> Result<Vec<Violation>> {
    let field = a.field();
    let candidates = match &spec.candidates {
        Some(c) => distinct(c)?,
        None => {
            let diag: Vec<Padic> = (0..a.rows()).map(|i| a.get(i, i).clone()).collect();
            distinct(&diag)?
        }
    };
    let mut polys = Vec::new();
    for degree in 1..=spec.degree_bound {
        for idx in multisets(candidates.len(), degree) {
            let roots: Vec<Padic> = idx.iter().map(|&i| candidates[i].clone()).collect();
            polys.push(PolynomialOverK::from_roots(field, &roots));
        }
        for _ in 0..spec.random_per_degree {
            let mut coeffs: Vec<Padic> = (0..degree)
                .map(|_| random_scalar(field, rng, -2, 2))
                .collect();
            coeffs.push(field.one());
            polys.push(PolynomialOverK::new(coeffs));
        }
    }
    let mut violations = Vec::new();
    for q in polys {
        let verdict = check_norm_identity(a, &q)?;
        if !verdict.holds {
            violations.push(Violation {
                polynomial: q,
                verdict,
            });
        }
    }
    Ok(violations)
}

/// Finite spectrum with its projections `E_lambda`.
#[derive(Clone, Debug)]
pub struct SpectralData {
    pub eigenvalues: Vec<Padic>,
    pub projections: Vec<KMatrix>,
}

impl SpectralData {
    pub fn n(&self) -> usize {
        self.projections.first().map_or(0, |e| e.rows())
    }

    /// `sum lambda E_lambda`.
    pub fn reconstruct(&self) -> KMatrix {
        self.combine(|l| l.clone())
    }

    fn combine(&self, f: impl Fn(&Padic) -> Padic) -> KMatrix {
        let field = self.projections[0].field();
        let mut acc = KMatrix::zeros(field, self.n(), self.n());
        for (l, e) in self.eigenvalues.iter().zip(&self.projections) {
            acc = &acc + &e.scale(&f(l));
        }
        acc
    }

    /// Partition of unity, mutual orthogonality and reconstruction of `a`.
    pub fn verify(&self, a: &KMatrix) -> Result<bool> {
        let field = a.field();
        let n = a.rows();
        let mut sum = KMatrix::zeros(field, n, n);
        for (i, e) in self.projections.iter().enumerate() {
            sum = &sum + e;
            for (j, f) in self.projections.iter().enumerate() {
                let prod = e * f;
                let ok = if i == j {
                    prod.same_as(e)?
                } else {
                    prod.is_zero_matrix()?
                };
                if !ok {
                    return Ok(false);
                }
            }
        }
        Ok(sum.is_identity()? && self.reconstruct().same_as(a)?)
    }
}

/// Spectral projections from Lagrange idempotents
/// `e_lambda(t) = prod_{mu != lambda} (t - mu) / (lambda - mu)`.
///
/// Fails with `NotDiagonalizable` unless `prod (A - lambda I) = 0` over the
/// distinct supplied values and every `E_lambda` is nonzero; a correct but
/// repeated list fails with `RepeatedEigenvalue`.
pub fn spectral_projections(a: &KMatrix, eigenvalues: &[Padic]) -> Result<SpectralData> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(
            "spectral data of a non-square matrix".into(),
        ));
    }
    let field = a.field();
    let n = a.rows();
    let values = distinct(eigenvalues)?;
    let id = KMatrix::identity(field, n);
    let shifted: Vec<KMatrix> = values.iter().map(|l| a - &id.scale(l)).collect();
    let mut product = id.clone();
    for s in &shifted {
        product = &product * s;
    }
    if !product.is_zero_matrix()? {
        return Err(Error::NotDiagonalizable(format!(
            "product of (A - lambda I) over {} values is not zero",
            values.len()
        )));
    }
    if values.len() < eigenvalues.len() {
        let mut seen: Vec<&Padic> = Vec::new();
        for (i, v) in eigenvalues.iter().enumerate() {
            for s in &seen {
                if s.same_as(v)? {
                    return Err(Error::RepeatedEigenvalue(i));
                }
            }
            seen.push(v);
        }
    }
    let mut projections = Vec::with_capacity(values.len());
    for (i, l) in values.iter().enumerate() {
        let mut e = id.clone();
        for (j, mu) in values.iter().enumerate() {
            if i != j {
                e = &e * &shifted[j].scale(&(l - mu).inv()?);
            }
        }
        if e.is_zero_matrix()? {
            return Err(Error::NotDiagonalizable(format!(
                "{l} is not an eigenvalue"
            )));
        }
        projections.push(e);
    }
    let data = SpectralData {
        eigenvalues: values,
        projections,
    };
    if !data.verify(a)? {
        return Err(Error::NotDiagonalizable(
            "spectral identities failed".into(),
        ));
    }
    Ok(data)
}

/// `phi(A) = sum phi(lambda) E_lambda`.
pub fn functional_calculus(
    s: &SpectralData,
    phi: impl Fn(&Padic) -> Option<Padic>,
) -> Result<KMatrix> {
    let mut values = Vec::with_capacity(s.eigenvalues.len());
    for l in &s.eigenvalues {
        values.push(phi(l).ok_or_else(|| Error::MissingValue(l.to_string()))?);
    }
    let field = s.projections[0].field();
    let mut acc = KMatrix::zeros(field, s.n(), s.n());
    for (v, e) in values.iter().zip(&s.projections) {
        acc = &acc + &e.scale(v);
    }
    Ok(acc)
}

/// Pairs `(a, b)` for testing `||aP + b(I-P)|| = max(|a|, |b|)`: half with
/// independent valuations in `[-2, 2]`, half with equal valuations, plus
/// the cancelling pairs `(1, 1)` and `(1, -1)`.
pub fn sample_pairs<R: Rng + ?Sized>(
    field: &Field,
    rng: &mut R,
    count: usize,
) -> Vec<(Padic, Padic)> {
    let mut out = vec![(field.one(), field.one()), (field.one(), field.int(-1))];
    while out.len() < count.max(2) {
        let a = random_scalar(field, rng, -2, 2);
        let b = if out.len() % 2 == 0 {
            let v = a.valuation().expect("nonzero").finite().expect("finite");
            random_scalar(field, rng, v, v)
        } else {
            random_scalar(field, rng, -2, 2)
        };
        out.push((a, b));
    }
    out.truncate(count.max(2));
    out
}

/// Checks `||aP + b(I-P)|| = max(|a|, |b|)` on every pair; returns the
/// first failing pair. Terms with `P = 0` or `P = I` drop out of the max.
pub fn check_orthogonal_sum(
    p: &KMatrix,
    pairs: &[(Padic, Padic)],
) -> Result<Option<(Padic, Padic)>> {
    let field = p.field();
    let complement = &KMatrix::identity(field, p.rows()) - p;
    let (has_p, has_q) = (!p.is_zero_matrix()?, !complement.is_zero_matrix()?);
    for (a, b) in pairs {
        let m = &p.scale(a) + &complement.scale(b);
        let mut expected = Valuation::Infinite;
        if has_p {
            expected = expected.min(a.valuation()?);
        }
        if has_q {
            expected = expected.min(b.valuation()?);
        }
        if m.norm()? != NormExponent(expected) {
            return Ok(Some((a.clone(), b.clone())));
        }
    }
    Ok(None)
}

/// `P^2 = P` and (`P = 0` or `||P|| = 1`).
pub fn is_orthoprojection_criterion(p: &KMatrix) -> Result<bool> {
    if !p.is_idempotent()? {
        return Ok(false);
    }
    if p.is_zero_matrix()? {
        return Ok(true);
    }
    Ok(p.norm()? == NormExponent::UNIT)
}

/// Orthoprojection test. For a nontrivial `P` that meets the criterion, the
/// orthogonal-sum norm identity and `||P|| = ||I - P||` are also checked on
/// a fixed family of sample pairs.
pub fn is_orthoprojection(p: &KMatrix) -> Result<bool> {
    use rand::SeedableRng;
    if !is_orthoprojection_criterion(p)? {
        return Ok(false);
    }
    let field = p.field();
    if p.is_zero_matrix()? || p.is_identity()? {
        return Ok(true);
    }
    let complement = &KMatrix::identity(field, p.rows()) - p;
    if complement.norm()? != p.norm()? {
        return Ok(false);
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    let pairs = sample_pairs(field, &mut rng, 8);
    Ok(check_orthogonal_sum(p, &pairs)?.is_none())
}

/// Diagonal operator with the given values and its spectral data.
pub fn multiplication_operator(field: &Field, values: &[Padic]) -> Result<(KMatrix, SpectralData)> {
    let a = KMatrix::diag(field, values);
    let spectrum = distinct(values)?;
    let data = spectral_projections(&a, &spectrum)?;
    Ok((a, data))
}

/// One cell of a joint spectral decomposition.
#[derive(Clone, Debug)]
pub struct JointProjection {
    /// One eigenvalue per family member.
    pub eigenvalues: Vec<Padic>,
    pub projection: KMatrix,
}

/// Common refinement of the spectral projections of a commuting family,
/// each member given with its eigenvalues.
pub fn joint_spectral_measure(family: &[(KMatrix, Vec<Padic>)]) -> Result<Vec<JointProjection>> {
    for (i, (a, _)) in family.iter().enumerate() {
        for (j, (b, _)) in family.iter().enumerate().skip(i + 1) {
            if !a.commutator(b).is_zero_matrix()? {
                return Err(Error::NotCommuting(i, j));
            }
        }
    }
    let Some((first, _)) = family.first() else {
        return Ok(Vec::new());
    };
    let field = first.field();
    let n = first.rows();
    let mut cells = vec![JointProjection {
        eigenvalues: Vec::new(),
        projection: KMatrix::identity(field, n),
    }];
    for (a, values) in family {
        let data = spectral_projections(a, values)?;
        let mut next = Vec::new();
        for cell in &cells {
            for (l, e) in data.eigenvalues.iter().zip(&data.projections) {
                let prod = &cell.projection * e;
                if prod.is_zero_matrix()? {
                    continue;
                }
                let mut eigenvalues = cell.eigenvalues.clone();
                eigenvalues.push(l.clone());
                next.push(JointProjection {
                    eigenvalues,
                    projection: prod,
                });
            }
        }
        cells = next;
    }
    Ok(cells)
}

/// `sum f(lambda) E_lambda` over a joint decomposition.
pub fn joint_calculus(cells: &[JointProjection], f: impl Fn(&[Padic]) -> Padic) -> Option<KMatrix> {
    let first = cells.first()?;
    let field = first.projection.field();
    let n = first.projection.rows();
    let mut acc = KMatrix::zeros(field, n, n);
    for c in cells {
        acc = &acc + &c.projection.scale(&f(&c.eigenvalues));
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn mihara(f: &Field) -> KMatrix {
        let p = f.p() as i64;
        KMatrix::from_ints(f, &[&[p, p, 0], &[0, p, 0], &[0, 0, 1]])
    }

    #[test]
    fn mihara_violates_norm_identity() {
        let f = Field::new(5, 20).unwrap();
        let a = mihara(&f);
        let q = PolynomialOverK::from_roots(&f, &[f.int(1), f.int(5)]);
        let v = check_norm_identity(&a, &q).unwrap();
        assert!(!v.holds);
        assert_eq!(v.rhs, NormExponent::finite(2));
        assert_eq!(v.lhs, NormExponent::ZERO_NORM);
        let v = check_norm_identity(&a, &PolynomialOverK::identity(&f)).unwrap();
        assert!(v.holds);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let found = normality_scan(&a, &ScanSpec::new(3), &mut rng).unwrap();
        assert!(found.iter().any(|v| v.polynomial == q));
    }

    #[test]
    fn spectral_projection_examples() {
        let f = Field::new(5, 20).unwrap();
        let d = KMatrix::diag(&f, &[f.int(1), f.int(5)]);
        let s = spectral_projections(&d, &[f.int(1), f.int(5)]).unwrap();
        assert!(s.projections[0]
            .same_as(&KMatrix::diag(&f, &[f.one(), f.zero()]))
            .unwrap());
        let a = mihara(&f);
        assert!(matches!(
            spectral_projections(&a, &[f.int(1), f.int(5)]),
            Err(Error::NotDiagonalizable(_))
        ));
        assert!(matches!(
            spectral_projections(&a, &[f.int(1), f.int(5), f.int(5)]),
            Err(Error::NotDiagonalizable(_))
        ));
        assert_eq!(
            spectral_projections(&d, &[f.int(1), f.int(5), f.int(5)]).unwrap_err(),
            Error::RepeatedEigenvalue(2)
        );
        assert!(matches!(
            spectral_projections(&d, &[f.int(1), f.int(5), f.int(2)]),
            Err(Error::NotDiagonalizable(_))
        ));
        let id = functional_calculus(&s, |l| Some(l.clone())).unwrap();
        assert!(id.same_as(&d).unwrap());
        assert!(matches!(
            functional_calculus(&s, |l| l.is_one().then(|| f.one())),
            Err(Error::MissingValue(_))
        ));
    }

    #[test]
    fn orthoprojection_examples() {
        let f = Field::new(5, 20).unwrap();
        assert!(is_orthoprojection(&KMatrix::identity(&f, 2)).unwrap());
        assert!(is_orthoprojection(&KMatrix::from_ints(&f, &[&[1, 1], &[0, 0]])).unwrap());
        let bad = KMatrix::from_rows(
            &f,
            vec![vec![f.one(), f.ratio(1, 5)], vec![f.zero(), f.zero()]],
        );
        assert!(bad.is_idempotent().unwrap());
        assert_eq!(bad.norm().unwrap(), NormExponent::finite(-1));
        assert!(!is_orthoprojection(&bad).unwrap());
    }

    #[test]
    fn joint_measure() {
        let f = Field::new(5, 20).unwrap();
        let a = KMatrix::diag(&f, &[f.int(1), f.int(5)]);
        let b = KMatrix::diag(&f, &[f.int(5), f.int(5)]);
        let cells =
            joint_spectral_measure(&[(a.clone(), vec![f.int(1), f.int(5)]), (b, vec![f.int(5)])])
                .unwrap();
        assert_eq!(cells.len(), 2);
        let c = KMatrix::from_ints(&f, &[&[0, 1], &[0, 0]]);
        assert_eq!(
            joint_spectral_measure(&[(a, vec![]), (c, vec![])]).unwrap_err(),
            Error::NotCommuting(0, 1)
        );
    }
}
