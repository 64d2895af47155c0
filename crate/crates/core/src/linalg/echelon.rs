//! Row reduction over `Q_p`.
//!
//! Pivots are always the entry of largest norm among the remaining
//! candidates (ties: lowest row, then lowest column). With that rule every
//! multiplier has norm at most one, so entries never grow and cancellation
//! is the only source of precision loss. Vanished entries are cleared to
//! exact zero once they sit `zero_margin` digits below the scale of the
//! input; anything less certain raises `PrecisionLoss`.

use crate::error::Result;
use crate::linalg::matrix::KMatrix;
use crate::padic::{Field, Padic};

fn clean(v: &mut [Padic], reference: i64, field: &Field) -> Result<()> {
    for x in v.iter_mut() {
        if !x.is_zero() && !x.is_nonzero() && x.is_negligible(reference)? {
            *x = field.zero();
        }
    }
    Ok(())
}

fn min_bound<'a>(entries: impl IntoIterator<Item = &'a Padic>) -> i64 {
    entries
        .into_iter()
        .filter_map(|x| x.valuation_lower_bound())
        .min()
        .unwrap_or(0)
        .min(0)
}

/// `target -= factor * source`, skipping exact zeros.
fn axpy(target: &mut [Padic], factor: &Padic, source: &[Padic]) {
    let one = factor.is_one();
    for (t, s) in target.iter_mut().zip(source) {
        if s.is_zero() {
            continue;
        }
        *t = if one { &*t - s } else { &*t - &(factor * s) };
    }
}

fn normalize(row: &mut [Padic], pivot: usize) -> Result<()> {
    let inv = row[pivot].inv()?;
    for x in row.iter_mut() {
        if !x.is_zero() {
            *x = &*x * &inv;
        }
    }
    Ok(())
}

/// Position of the largest-norm certified nonzero entry of `v`.
fn max_entry(v: &[Padic]) -> Result<Option<usize>> {
    let mut best: Option<(usize, i64)> = None;
    for (j, x) in v.iter().enumerate() {
        if x.is_nonzero() {
            let val = x.valuation()?.finite().expect("nonzero");
            if best.is_none_or(|(_, b)| val < b) {
                best = Some((j, val));
            }
        }
    }
    Ok(best.map(|(j, _)| j))
}

/// Reduced row echelon form with full max-norm pivoting.
#[derive(Clone, Debug)]
pub struct Rref {
    /// Reduced rows; the first `pivots.len()` rows are the nonzero ones.
    pub rows: Vec<Vec<Padic>>,
    /// Pivot column of each nonzero row.
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn rref(m: &KMatrix) -> Result<Rref> {
    let field = m.field().clone();
    let cols = m.cols();
    let mut rows = m.to_rows();
    let reference = min_bound(m.entries());
    for row in rows.iter_mut() {
        clean(row, reference, &field)?;
    }
    let mut used = vec![false; cols];
    let mut pivots = Vec::new();
    let mut rank = 0;
    loop {
        let mut best: Option<(usize, usize, i64)> = None;
        for (r, row) in rows.iter().enumerate().skip(rank) {
            for (c, x) in row.iter().enumerate() {
                if used[c] || !x.is_nonzero() {
                    continue;
                }
                let v = x.valuation()?.finite().expect("nonzero");
                if best.is_none_or(|(_, _, b)| v < b) {
                    best = Some((r, c, v));
                }
            }
        }
        let Some((r, c, _)) = best else { break };
        rows.swap(rank, r);
        normalize(&mut rows[rank], c)?;
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            axpy(row, &factor, &pivot_row);
            row[c] = field.zero();
            clean(row, reference, &field)?;
        }
        used[c] = true;
        pivots.push(c);
        rank += 1;
    }
    Ok(Rref { rows, pivots, cols })
}

pub fn rank(m: &KMatrix) -> Result<usize> {
    Ok(rref(m)?.rank())
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace(m: &KMatrix) -> Result<Vec<Vec<Padic>>> {
    let field = m.field();
    let r = rref(m)?;
    let mut is_pivot = vec![false; r.cols];
    for &c in &r.pivots {
        is_pivot[c] = true;
    }
    let mut out = Vec::new();
    for free in (0..r.cols).filter(|&c| !is_pivot[c]) {
        let mut x = vec![field.zero(); r.cols];
        x[free] = field.one();
        for (i, &pc) in r.pivots.iter().enumerate() {
            let entry = &r.rows[i][free];
            if !entry.is_zero() {
                x[pc] = -entry;
            }
        }
        out.push(x);
    }
    Ok(out)
}

/// A subspace of `K^n` kept in reduced echelon form, grown one vector at a time.
#[derive(Clone, Debug)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    rows: Vec<Vec<Padic>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(field: &Field, ambient: usize) -> Subspace {
        Subspace {
            field: field.clone(),
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn spanned_by<'a>(
        field: &Field,
        ambient: usize,
        vectors: impl IntoIterator<Item = &'a [Padic]>,
    ) -> Result<Subspace> {
        let mut s = Subspace::new(field, ambient);
        for v in vectors {
            s.insert(v)?;
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Echelon basis; every vector has norm one and a unit pivot.
    pub fn basis(&self) -> &[Vec<Padic>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn reduce(&self, v: &[Padic]) -> Result<Vec<Padic>> {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let reference = min_bound(v);
        let mut w = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if w[pc].is_zero() {
                continue;
            }
            let factor = w[pc].clone();
            axpy(&mut w, &factor, row);
            w[pc] = self.field.zero();
        }
        clean(&mut w, reference, &self.field)?;
        Ok(w)
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[Padic]) -> Result<bool> {
        let mut w = self.reduce(v)?;
        let Some(pc) = max_entry(&w)? else {
            return Ok(false);
        };
        normalize(&mut w, pc)?;
        for row in self.rows.iter_mut() {
            if row[pc].is_zero() {
                continue;
            }
            let factor = row[pc].clone();
            axpy(row, &factor, &w);
            row[pc] = self.field.zero();
            clean(row, 0, &self.field)?;
        }
        self.rows.push(w);
        self.pivots.push(pc);
        Ok(true)
    }

    pub fn contains(&self, v: &[Padic]) -> Result<bool> {
        let w = self.reduce(v)?;
        Ok(w.iter().all(|x| x.is_zero()))
    }

    /// Coefficients of `v` in [`Subspace::basis`], or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[Padic]) -> Result<Option<Vec<Padic>>> {
        if !self.contains(v)? {
            return Ok(None);
        }
        Ok(Some(self.pivots.iter().map(|&pc| v[pc].clone()).collect()))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        for v in &other.rows {
            if !self.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality by containment both ways.
    pub fn same_as(&self, other: &Subspace) -> Result<bool> {
        Ok(self.dim() == other.dim()
            && self.contains_subspace(other)?
            && other.contains_subspace(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_nullspace() {
        let f = Field::new(5, 20).unwrap();
        let m = KMatrix::from_ints(&f, &[&[1, 2, 3], &[2, 4, 6], &[0, 5, 1]]);
        assert_eq!(rank(&m).unwrap(), 2);
        let ns = nullspace(&m).unwrap();
        assert_eq!(ns.len(), 1);
        let image = m.mat_vec(&ns[0]);
        assert!(image.iter().all(|x| x.is_negligible(0).unwrap()));
    }

    #[test]
    fn pivot_prefers_largest_norm() {
        let f = Field::new(5, 20).unwrap();
        let m = KMatrix::from_ints(&f, &[&[5, 1]]);
        let r = rref(&m).unwrap();
        assert_eq!(r.pivots, vec![1]);
    }

    #[test]
    fn subspace_membership_and_coordinates() {
        let f = Field::new(3, 20).unwrap();
        let mut s = Subspace::new(&f, 3);
        assert!(s.insert(&[f.int(1), f.int(3), f.int(0)]).unwrap());
        assert!(s.insert(&[f.int(0), f.int(1), f.int(1)]).unwrap());
        assert!(!s.insert(&[f.int(2), f.int(7), f.int(1)]).unwrap());
        let v = [f.int(1), f.int(5), f.int(2)];
        let c = s.coordinates(&v).unwrap().unwrap();
        let mut rebuilt = vec![f.zero(); 3];
        for (ci, row) in c.iter().zip(s.basis()) {
            for (r, x) in rebuilt.iter_mut().zip(row) {
                *r = &*r + &(ci * x);
            }
        }
        for (a, b) in rebuilt.iter().zip(&v) {
            assert_eq!(a, b);
        }
        assert!(!s.contains(&[f.int(0), f.int(0), f.int(1)]).unwrap());
    }

    #[test]
    fn capped_cancellation_is_cleared() {
        let f = Field::new(5, 16).unwrap();
        let z = crate::padic::teichmuller_root(&f, 4).unwrap();
        let z2 = z.pow(2);
        // rows (1, z) and (z, z^2) are dependent
        let m = KMatrix::from_rows(&f, vec![vec![f.one(), z.clone()], vec![z.clone(), z2]]);
        assert_eq!(rank(&m).unwrap(), 1);
    }
}
