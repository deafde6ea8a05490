//! Exact linear algebra over the rationals.
//!
//! Everything here works with [`Rational`] (arbitrary-precision) entries and
//! produces canonical reduced row echelon forms, so two subspaces are equal
//! exactly when their canonical bases are equal.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::BadRational(s.to_string());
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(
            BigInt::from_str(t).map_err(|_| bad())?,
        )),
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// A dense `rows x cols` matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    cols: usize,
    rows: Vec<Vec<Rational>>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect();
        write!(f, "Matrix{}x{}{:?}", self.rows.len(), self.cols, rows)
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            cols,
            rows: vec![vec![Rational::zero(); cols]; rows],
        }
    }

    pub fn empty(cols: usize) -> Self {
        Matrix {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        for r in &rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
        }
        Ok(Matrix { cols, rows })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged matrix literal");
                r.iter().map(|&v| rat(v)).collect()
            })
            .collect();
        Matrix { cols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn into_rows(self) -> Vec<Vec<Rational>> {
        self.rows
    }

    pub fn push_row(&mut self, row: Vec<Rational>) {
        assert_eq!(row.len(), self.cols);
        self.rows.push(row);
    }

    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols
    }

    /// `M * x` for a column vector `x`.
    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok(self.rows.iter().map(|r| dot(r, x)).collect())
    }

    /// `y * M` for a row vector `y`.
    pub fn vec_mul(&self, y: &[Rational]) -> Result<Vec<Rational>> {
        if y.len() != self.rows.len() {
            return Err(Error::DimensionMismatch {
                expected: self.rows.len(),
                found: y.len(),
            });
        }
        let mut out = vec![Rational::zero(); self.cols];
        for (coef, row) in y.iter().zip(&self.rows) {
            if coef.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(row) {
                if !v.is_zero() {
                    *o += coef * v;
                }
            }
        }
        Ok(out)
    }

    /// Reduces in place to reduced row echelon form, dropping zero rows.
    /// Returns the pivot columns. The pivot is always the first nonzero
    /// entry of a column; arithmetic is exact so no other choice is needed.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows.len() {
                break;
            }
            let Some(p) = (r..self.rows.len()).find(|&i| !self.rows[i][c].is_zero()) else {
                continue;
            };
            self.rows.swap(r, p);
            let inv = self.rows[r][c].recip();
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
            let pivot_row = self.rows[r].clone();
            for (i, row) in self.rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *v -= &f * p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        self.rows.truncate(r);
        pivots
    }

    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let piv = m.rref_in_place();
        (m, piv)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis (reduced echelon rows) of `{v | M v = 0}`.
    pub fn null_space(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let mut basis = Matrix::empty(self.cols);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (row, &p) in r.rows.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            basis.rows.push(v);
        }
        basis.rref_in_place();
        basis
    }

    /// Canonical basis of the row space.
    pub fn row_space(&self) -> Matrix {
        self.rref().0
    }

    /// Whether `v` lies in the row space of this matrix, assumed already in
    /// reduced echelon form with the given pivots.
    pub fn rref_contains(&self, pivots: &[usize], v: &[Rational]) -> bool {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(pivots) {
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for (x, y) in w.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        w.iter().all(Zero::is_zero)
    }

    /// Stacks `self` over `other` (same column count).
    pub fn stack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Matrix {
            cols: self.cols,
            rows,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(Zero::is_zero)
    }

    pub fn has_negative(&self) -> bool {
        self.rows.iter().flatten().any(Signed::is_negative)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("3").unwrap(), rat(3));
        assert_eq!(parse_rational("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational(" 1 / 3 ").unwrap(), ratio(1, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&ratio(-3, 2)), "-3/2");
        assert_eq!(format_rational(&rat(7)), "7");
    }

    #[test]
    fn rref_is_canonical() {
        let a = Matrix::from_i64(&[&[2, 4, 0], &[1, 2, 1], &[3, 6, 1]]);
        let b = Matrix::from_i64(&[&[0, 0, 5], &[1, 2, 0]]);
        assert_eq!(a.row_space(), b.row_space());
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn null_space_of_full_rank_is_empty() {
        let m = Matrix::identity(3);
        assert_eq!(m.null_space().nrows(), 0);
        let z = Matrix::zeros(1, 3);
        assert_eq!(z.null_space(), Matrix::identity(3));
    }

    #[test]
    fn null_space_annihilates() {
        let m = Matrix::from_i64(&[&[1, 1, 0, -1], &[0, 1, 2, 3]]);
        let ns = m.null_space();
        assert_eq!(ns.nrows(), 2);
        for v in ns.rows() {
            assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn vector_products() {
        let m = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert_eq!(m.mul_vec(&[rat(0), rat(1)]).unwrap(), vec![rat(1), rat(0)]);
        assert_eq!(m.vec_mul(&[rat(1), rat(0)]).unwrap(), vec![rat(0), rat(1)]);
        assert!(m.mul_vec(&[rat(1)]).is_err());
    }
}
