use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::padic::{Field, Padic, Valuation, ValuationBound};

/// Norm `p^(-e)` stored as the exponent `e`. Larger exponent = smaller norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct NormExponent(pub Valuation);

impl NormExponent {
    pub const ZERO_NORM: NormExponent = NormExponent(Valuation::Infinite);
    pub const UNIT: NormExponent = NormExponent(Valuation::Finite(0));

    pub fn finite(e: i64) -> NormExponent {
        NormExponent(Valuation::Finite(e))
    }

    pub fn value(self) -> Option<i64> {
        self.0.finite()
    }

    /// Exponent of a product of norms.
    pub fn times(self, other: NormExponent) -> NormExponent {
        NormExponent(self.0 + other.0)
    }

    /// `||self|| <= ||other||`.
    pub fn norm_le(self, other: NormExponent) -> bool {
        self.0 >= other.0
    }
}

impl fmt::Display for NormExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Valuation::Finite(e) => write!(f, "p^({})", -e),
            Valuation::Infinite => write!(f, "0"),
        }
    }
}

/// What is known about a norm when some entries have vanished.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormBound {
    Exact(NormExponent),
    /// Norm at most `p^(-e)`.
    AtLeast(i64),
}

/// Max norm of a family of scalars (the sup norm of a vector in `c_0`).
pub fn sup_norm_bound<'a>(entries: impl IntoIterator<Item = &'a Padic>) -> NormBound {
    let mut certified: Option<i64> = None;
    let mut vanished: Option<i64> = None;
    for x in entries {
        match x.valuation_bound() {
            ValuationBound::Exact(Valuation::Finite(v)) => {
                certified = Some(certified.map_or(v, |c| c.min(v)))
            }
            ValuationBound::Exact(Valuation::Infinite) => {}
            ValuationBound::AtLeast(a) => vanished = Some(vanished.map_or(a, |c| c.min(a))),
        }
    }
    match (certified, vanished) {
        (None, None) => NormBound::Exact(NormExponent::ZERO_NORM),
        (Some(v), None) => NormBound::Exact(NormExponent::finite(v)),
        (Some(v), Some(a)) if a >= v => NormBound::Exact(NormExponent::finite(v)),
        (c, Some(a)) => NormBound::AtLeast(c.map_or(a, |c| c.min(a))),
    }
}

pub fn sup_norm<'a>(entries: impl IntoIterator<Item = &'a Padic>) -> Result<NormExponent> {
    match sup_norm_bound(entries) {
        NormBound::Exact(e) => Ok(e),
        NormBound::AtLeast(a) => Err(Error::PrecisionLoss(format!(
            "norm only bounded by p^({}); entries vanished to precision",
            -a
        ))),
    }
}

/// Dense matrix over `Q_p`: a bounded operator on `c_0` of the coordinate
/// space with its standard orthonormal basis.
#[derive(Clone)]
pub struct KMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Padic>,
}

impl KMatrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<Padic>) -> KMatrix {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        KMatrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> KMatrix {
        KMatrix::new(field, rows, cols, vec![field.zero(); rows * cols])
    }

    pub fn identity(field: &Field, n: usize) -> KMatrix {
        KMatrix::from_fn(
            field,
            n,
            n,
            |i, j| {
                if i == j {
                    field.one()
                } else {
                    field.zero()
                }
            },
        )
    }

    pub fn from_fn(
        field: &Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Padic,
    ) -> KMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        KMatrix::new(field, rows, cols, data)
    }

    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> KMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        KMatrix::from_fn(field, r, c, |i, j| field.int(rows[i][j]))
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Padic>>) -> KMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        KMatrix::new(field, r, c, rows.into_iter().flatten().collect())
    }

    pub fn diag(field: &Field, values: &[Padic]) -> KMatrix {
        let n = values.len();
        KMatrix::from_fn(field, n, n, |i, j| {
            if i == j {
                values[i].clone()
            } else {
                field.zero()
            }
        })
    }

    /// Square matrix from a row-major flattening of length `n^2`.
    pub fn from_flat(field: &Field, n: usize, flat: Vec<Padic>) -> KMatrix {
        KMatrix::new(field, n, n, flat)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Padic {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Padic) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Padic] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Padic] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Padic> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn flatten(&self) -> Vec<Padic> {
        self.data.clone()
    }

    pub fn to_rows(&self) -> Vec<Vec<Padic>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> KMatrix {
        KMatrix::from_fn(&self.field, self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn map(&self, f: impl Fn(&Padic) -> Padic) -> KMatrix {
        KMatrix::new(
            &self.field,
            self.rows,
            self.cols,
            self.data.iter().map(f).collect(),
        )
    }

    pub fn scale(&self, c: &Padic) -> KMatrix {
        if c.is_zero() {
            return KMatrix::zeros(&self.field, self.rows, self.cols);
        }
        self.map(|x| if x.is_zero() { x.clone() } else { x * c })
    }

    pub fn mat_vec(&self, v: &[Padic]) -> Vec<Padic> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: u32) -> KMatrix {
        assert!(self.is_square());
        let mut acc = KMatrix::identity(&self.field, self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &KMatrix) -> KMatrix {
        &(self * other) - &(other * self)
    }

    /// Operator norm with respect to the standard orthonormal basis: the
    /// largest entry norm, returned as an exponent.
    pub fn norm(&self) -> Result<NormExponent> {
        sup_norm(&self.data)
    }

    pub fn norm_bound(&self) -> NormBound {
        sup_norm_bound(&self.data)
    }

    /// Smallest certified lower bound on entry valuations (`None` if all exact zero).
    pub fn min_valuation_bound(&self) -> Option<i64> {
        self.data
            .iter()
            .filter_map(|x| x.valuation_lower_bound())
            .min()
    }

    /// Entrywise equality certified to precision.
    pub fn same_as(&self, other: &KMatrix) -> Result<bool> {
        if self.rows != other.rows || self.cols != other.cols {
            return Ok(false);
        }
        let reference = self
            .min_valuation_bound()
            .into_iter()
            .chain(other.min_valuation_bound())
            .min()
            .unwrap_or(0)
            .min(0);
        for (a, b) in self.data.iter().zip(&other.data) {
            if !(a - b).is_negligible(reference)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_zero_matrix(&self) -> Result<bool> {
        let reference = self.min_valuation_bound().unwrap_or(0).min(0);
        for x in &self.data {
            if !x.is_negligible(reference)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_identity(&self) -> Result<bool> {
        if !self.is_square() {
            return Ok(false);
        }
        self.same_as(&KMatrix::identity(&self.field, self.rows))
    }

    pub fn is_idempotent(&self) -> Result<bool> {
        Ok(self.is_square() && (self * self).same_as(self)?)
    }

    /// Inverse by Gauss-Jordan elimination, pivoting on the largest entry of
    /// each column.
    pub fn inverse(&self) -> Result<KMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "inverse of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let f = &self.field;
        let mut a = self.to_rows();
        let mut inv = KMatrix::identity(f, n).to_rows();
        let reference = self.min_valuation_bound().unwrap_or(0).min(0);
        for c in 0..n {
            let mut best: Option<(usize, i64)> = None;
            for (r, row) in a.iter().enumerate().skip(c) {
                if row[c].is_nonzero() {
                    let v = row[c].valuation()?.finite().expect("nonzero");
                    if best.is_none_or(|(_, bv)| v < bv) {
                        best = Some((r, v));
                    }
                }
            }
            let (r, _) = best.ok_or(Error::DivisionByZero)?;
            a.swap(c, r);
            inv.swap(c, r);
            let pinv = a[c][c].inv()?;
            for x in a[c].iter_mut().chain(inv[c].iter_mut()) {
                if !x.is_zero() {
                    *x = &*x * &pinv;
                }
            }
            let (pa, pi) = (a[c].clone(), inv[c].clone());
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let factor = a[r][c].clone();
                for (x, y) in a[r].iter_mut().zip(&pa).chain(inv[r].iter_mut().zip(&pi)) {
                    if !y.is_zero() {
                        *x = &*x - &(&factor * y);
                        if x.is_negligible(reference)? {
                            *x = f.zero();
                        }
                    }
                }
            }
        }
        Ok(KMatrix::from_rows(f, inv))
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &KMatrix) -> KMatrix {
        let (r, c) = (self.rows + other.rows, self.cols + other.cols);
        KMatrix::from_fn(&self.field, r, c, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols).clone()
            } else {
                self.field.zero()
            }
        })
    }
}

impl fmt::Debug for KMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "KMatrix {}x{} over {:?} [",
            self.rows, self.cols, self.field
        )?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for KMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<'a> Mul<&'a KMatrix> for &'a KMatrix {
    type Output = KMatrix;
    fn mul(self, rhs: &'a KMatrix) -> KMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let f = &self.field;
        let mut out = vec![f.zero(); self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let one = a.is_one();
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let slot = &mut out[i * rhs.cols + j];
                    *slot = if one { &*slot + b } else { &*slot + &(a * b) };
                }
            }
        }
        KMatrix::new(f, self.rows, rhs.cols, out)
    }
}

impl<'a> Add<&'a KMatrix> for &'a KMatrix {
    type Output = KMatrix;
    fn add(self, rhs: &'a KMatrix) -> KMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        KMatrix::new(
            &self.field,
            self.rows,
            self.cols,
            self.data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl<'a> Sub<&'a KMatrix> for &'a KMatrix {
    type Output = KMatrix;
    fn sub(self, rhs: &'a KMatrix) -> KMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        KMatrix::new(
            &self.field,
            self.rows,
            self.cols,
            self.data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Neg for &KMatrix {
    type Output = KMatrix;
    fn neg(self) -> KMatrix {
        self.map(|x| -x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_examples() {
        let f = Field::new(5, 32).unwrap();
        assert_eq!(
            KMatrix::zeros(&f, 3, 3).norm().unwrap(),
            NormExponent::ZERO_NORM
        );
        let a = KMatrix::from_ints(&f, &[&[5, 5, 0], &[0, 5, 0], &[0, 0, 1]]);
        assert_eq!(a.norm().unwrap(), NormExponent::UNIT);
        let d = KMatrix::diag(&f, &[f.ratio(1, 25), f.int(5)]);
        assert_eq!(d.norm().unwrap(), NormExponent::finite(-2));
    }

    #[test]
    fn vanished_entries_block_certification() {
        let f = Field::new(5, 8).unwrap();
        let m = KMatrix::new(&f, 1, 2, vec![f.vanished(2), f.int(125)]);
        assert_eq!(m.norm_bound(), NormBound::AtLeast(2));
        assert!(matches!(m.norm(), Err(Error::PrecisionLoss(_))));
        let m = KMatrix::new(&f, 1, 2, vec![f.vanished(30), f.int(125)]);
        assert_eq!(m.norm().unwrap(), NormExponent::finite(3));
    }

    #[test]
    fn inverse_roundtrip() {
        let f = Field::new(7, 20).unwrap();
        let a = KMatrix::from_ints(&f, &[&[1, 7, 2], &[0, 3, 14], &[5, 1, 1]]);
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_identity().unwrap());
        let singular = KMatrix::from_ints(&f, &[&[1, 2], &[2, 4]]);
        assert!(singular.inverse().is_err());
    }
}
