use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{inv_mod, Field, Scalar};

/// Work size above which row updates are spread across the rayon pool.
const PAR_THRESHOLD: usize = 1 << 16;

/// A dense row-major matrix of scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    nrows: usize,
    ncols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, nrows: usize, ncols: usize) -> Matrix {
        Matrix {
            nrows,
            ncols,
            entries: vec![field.zero(); nrows * ncols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Domain("ragged rows".into()));
        }
        Ok(Matrix {
            nrows,
            ncols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(field: Field, rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
                .collect(),
        )
        .expect("rectangular input")
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.ncols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.ncols..(i + 1) * self.ncols]
    }

    /// The common field of all entries; an empty matrix reports `None`.
    pub fn field(&self) -> Result<Option<Field>> {
        let Some(first) = self.entries.first() else {
            return Ok(None);
        };
        let f = first.field();
        if self.entries.iter().any(|e| e.field() != f) {
            return Err(Error::MixedScalars);
        }
        Ok(Some(f))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.ncols != other.nrows {
            return Err(Error::Domain("dimension mismatch in product".into()));
        }
        let field = match (self.field()?, other.field()?) {
            (Some(a), Some(b)) if a != b => return Err(Error::MixedScalars),
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => Field::Rational,
        };
        let mut out = Matrix::zeros(field, self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let v = out.get(i, j).add(&a.mul(other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Exact rank: fraction-free Bareiss over Q, plain elimination over `F_p`.
    pub fn rank(&self) -> Result<usize> {
        match self.field()? {
            None => Ok(0),
            Some(Field::Prime(p)) => {
                let rows = (0..self.nrows)
                    .map(|i| self.row(i).iter().map(|s| s.as_fp().unwrap().value()).collect())
                    .collect();
                Ok(rank_mod_p(rows, p))
            }
            Some(Field::Rational) => {
                let rows = (0..self.nrows).map(|i| integer_row(self.row(i))).collect();
                Ok(rank_bareiss(rows))
            }
        }
    }

    /// Determinant by Gaussian elimination over the entries' field.
    pub fn determinant(&self) -> Result<Scalar> {
        if self.nrows != self.ncols {
            return Err(Error::Domain("determinant of a non-square matrix".into()));
        }
        let field = self.field()?.unwrap_or(Field::Rational);
        let n = self.nrows;
        let mut a = self.clone();
        let mut det = field.one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&i| !a.get(i, col).is_zero()) else {
                return Ok(field.zero());
            };
            if piv != col {
                a.swap_rows(piv, col);
                det = det.neg();
            }
            let pv = a.get(col, col).clone();
            det = det.mul(&pv);
            let inv = pv.inv();
            for i in col + 1..n {
                let factor = a.get(i, col).mul(&inv);
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = a.get(i, j).sub(&factor.mul(a.get(col, j)));
                    a.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Solves `self * x = rhs` for square nonsingular `self`.
    pub fn solve(&self, rhs: &[Scalar]) -> Result<Vec<Scalar>> {
        let n = self.nrows;
        if self.ncols != n || rhs.len() != n {
            return Err(Error::Domain("solve needs a square system".into()));
        }
        let field = self.field()?.unwrap_or(Field::Rational);
        if rhs.iter().any(|s| s.field() != field) {
            return Err(Error::MixedScalars);
        }
        let mut a: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(rhs[i].clone());
                r
            })
            .collect();
        for col in 0..n {
            let piv = (col..n)
                .find(|&i| !a[i][col].is_zero())
                .ok_or_else(|| Error::Domain("singular system".into()))?;
            a.swap(piv, col);
            let inv = a[col][col].inv();
            for v in a[col].iter_mut() {
                *v = v.mul(&inv);
            }
            let pivot_row = a[col].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == col || row[col].is_zero() {
                    continue;
                }
                let factor = row[col].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v = v.sub(&factor.mul(p));
                }
            }
        }
        Ok(a.into_iter().map(|mut r| r.pop().unwrap()).collect())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.ncols {
            self.entries.swap(a * self.ncols + j, b * self.ncols + j);
        }
    }
}

/// Clears denominators of one rational row; rank is unaffected.
fn integer_row(row: &[Scalar]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .map(|s| s.as_rational().unwrap().denom().clone())
        .fold(BigInt::one(), |acc, d| acc.lcm(&d));
    row.iter()
        .map(|s| {
            let q = s.as_rational().unwrap();
            q.numer() * (&lcm / q.denom())
        })
        .collect()
}

/// Rank of a dense matrix over `F_p` (entries already reduced).
pub(crate) fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(piv) = (rank..nrows).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(piv, rank);
        let inv = inv_mod(rows[rank][col], p);
        for v in rows[rank][col..].iter_mut() {
            *v = *v * inv % p;
        }
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot = &head[rank][col..];
        let update = |row: &mut Vec<u64>| {
            let f = row[col];
            if f == 0 {
                return;
            }
            let neg = p - f;
            for (v, &pv) in row[col..].iter_mut().zip(pivot) {
                if pv != 0 {
                    *v = (*v + neg * pv) % p;
                }
            }
        };
        if tail.len() * (ncols - col) > PAR_THRESHOLD {
            tail.par_iter_mut().for_each(update);
        } else {
            tail.iter_mut().for_each(update);
        }
        rank += 1;
    }
    rank
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
///
/// Every intermediate entry is a minor of the input, so the division by the
/// previous pivot is exact even when rank-deficient columns are skipped.
pub(crate) fn rank_bareiss(mut rows: Vec<Vec<BigInt>>) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(piv) = (rank..nrows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(piv, rank);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let pv = &pivot_row[col];
        let update = |row: &mut Vec<BigInt>| {
            let f = row[col].clone();
            for j in col + 1..ncols {
                let v = &row[j] * pv - &f * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        };
        if tail.len() * (ncols - col) > PAR_THRESHOLD / 16 {
            tail.par_iter_mut().for_each(update);
        } else {
            tail.iter_mut().for_each(update);
        }
        prev = head[rank][col].clone();
        rank += 1;
    }
    rank
}
