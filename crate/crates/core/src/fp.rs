//! Dense linear algebra over the residue field `F_p`.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigUint;
use serde::ser::{Serialize, Serializer};

use crate::padic::pow_mod;

pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    (!a.is_multiple_of(p)).then(|| pow_mod(a % p, p - 2, p))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn new(p: u64, rows: usize, cols: usize, data: Vec<u64>) -> FpMatrix {
        assert_eq!(data.len(), rows * cols);
        FpMatrix {
            p,
            rows,
            cols,
            data: data.into_iter().map(|x| x % p).collect(),
        }
    }

    pub fn zeros(p: u64, rows: usize, cols: usize) -> FpMatrix {
        FpMatrix::new(p, rows, cols, vec![0; rows * cols])
    }

    pub fn identity(p: u64, n: usize) -> FpMatrix {
        FpMatrix::from_fn(p, n, n, |i, j| u64::from(i == j))
    }

    pub fn from_fn(
        p: u64,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u64,
    ) -> FpMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j) % p);
            }
        }
        FpMatrix {
            p,
            rows,
            cols,
            data,
        }
    }

    pub fn from_ints(p: u64, rows: &[&[i64]]) -> FpMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        FpMatrix::from_fn(p, r, c, |i, j| rows[i][j].rem_euclid(p as i64) as u64)
    }

    /// Matrix unit `E_ij` of size `n`.
    pub fn unit(p: u64, n: usize, i: usize, j: usize) -> FpMatrix {
        FpMatrix::from_fn(p, n, n, |a, b| u64::from(a == i && b == j))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> FpMatrix {
        FpMatrix::from_fn(self.p, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn scale(&self, c: u64) -> FpMatrix {
        let p = self.p;
        FpMatrix {
            p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * (c % p) % p).collect(),
        }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &FpMatrix) -> FpMatrix {
        FpMatrix::from_fn(
            self.p,
            self.rows + other.rows,
            self.cols + other.cols,
            |i, j| {
                if i < self.rows && j < self.cols {
                    self.get(i, j)
                } else if i >= self.rows && j >= self.cols {
                    other.get(i - self.rows, j - self.cols)
                } else {
                    0
                }
            },
        )
    }

    pub fn rref(&self) -> FpRref {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            for j in 0..m.cols {
                m.data.swap(r * m.cols + j, pr * m.cols + j);
            }
            let inv = inv_mod(m.get(r, c), p).expect("nonzero pivot");
            for j in 0..m.cols {
                let v = m.get(r, j) * inv % p;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = (m.get(i, j) + p * p - factor * m.get(r, j)) % p;
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        FpRref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of `{x : self x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let r = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &r.pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut x = vec![0; self.cols];
                x[free] = 1;
                for (i, &pc) in r.pivots.iter().enumerate() {
                    x[pc] = (p - r.matrix.get(i, free)) % p;
                }
                x
            })
            .collect()
    }

    /// One solution of `self x = b`, if any.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let aug = FpMatrix::from_fn(self.p, self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                b[i]
            }
        });
        let r = aug.rref();
        if r.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (i, &pc) in r.pivots.iter().enumerate() {
            x[pc] = r.matrix.get(i, self.cols);
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = FpMatrix::from_fn(self.p, n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j)
            } else {
                u64::from(j - n == i)
            }
        });
        let r = aug.rref();
        if r.pivots.len() < n || r.pivots[n - 1] >= n {
            return None;
        }
        Some(FpMatrix::from_fn(self.p, n, n, |i, j| {
            r.matrix.get(i, n + j)
        }))
    }

    pub fn pow(&self, mut e: u64) -> FpMatrix {
        let mut acc = FpMatrix::identity(self.p, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn pow_big(&self, e: &BigUint) -> FpMatrix {
        let mut acc = FpMatrix::identity(self.p, self.rows);
        for i in (0..e.bits()).rev() {
            acc = &acc * &acc;
            if e.bit(i) {
                acc = &acc * self;
            }
        }
        acc
    }

    pub fn mat_vec(&self, v: &[u64]) -> Vec<u64> {
        let p = self.p;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| (acc + a * b) % p)
            })
            .collect()
    }
}

impl Serialize for FpMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<&[u64]> = (0..self.rows).map(|i| self.row(i)).collect();
        rows.serialize(serializer)
    }
}

pub struct FpRref {
    pub matrix: FpMatrix,
    pub pivots: Vec<usize>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix(mod {}) [", self.p)?;
        for i in 0..self.rows {
            write!(f, "{:?}", self.row(i))?;
            if i + 1 < self.rows {
                write!(f, ", ")?;
            }
        }
        write!(f, "]")
    }
}

impl<'a> Mul<&'a FpMatrix> for &'a FpMatrix {
    type Output = FpMatrix;
    fn mul(self, rhs: &'a FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, rhs.rows);
        assert_eq!(self.p, rhs.p);
        let p = self.p;
        let mut out = vec![0u64; self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let slot = &mut out[i * rhs.cols + j];
                    *slot = (*slot + a * rhs.get(k, j)) % p;
                }
            }
        }
        FpMatrix {
            p,
            rows: self.rows,
            cols: rhs.cols,
            data: out,
        }
    }
}

impl<'a> Add<&'a FpMatrix> for &'a FpMatrix {
    type Output = FpMatrix;
    fn add(self, rhs: &'a FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let p = self.p;
        FpMatrix {
            p,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| (a + b) % p)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a FpMatrix> for &'a FpMatrix {
    type Output = FpMatrix;
    fn sub(self, rhs: &'a FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let p = self.p;
        FpMatrix {
            p,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| (a + p - b) % p)
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_over_f5() {
        let m = FpMatrix::from_ints(5, &[&[1, 2], &[2, 1]]);
        assert_eq!(m.rank(), 2);
        // (2, -1) = 2 * (1, 2) mod 5
        let m = FpMatrix::from_ints(5, &[&[1, 2], &[2, -1]]);
        assert_eq!(m.rank(), 1);
        let m = FpMatrix::from_ints(5, &[&[1, 1], &[1, 6]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn solve_and_inverse() {
        let m = FpMatrix::from_ints(7, &[&[1, 2, 0], &[0, 1, 3], &[4, 0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, FpMatrix::identity(7, 3));
        let b = vec![1, 2, 3];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mat_vec(&x), b);
        let singular = FpMatrix::from_ints(7, &[&[1, 2], &[2, 4]]);
        assert!(singular.inverse().is_none());
        assert!(singular.solve(&[1, 0]).is_none());
        let j = FpMatrix::from_ints(7, &[&[2, 1], &[0, 2]]);
        assert_eq!(j.pow_big(&BigUint::from(13u32)), j.pow(13));
        assert_eq!(singular.nullspace().len(), 1);
    }
}
