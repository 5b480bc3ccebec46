//! Exact dense linear algebra over any field-like scalar type: reduced row
//! echelon form, rank, solving, null spaces, determinants and inverses.
//!
//! The same kernel runs over finite-field scalars and over rational
//! functions (for the function-field linear systems), via the [`Ring`]
//! abstraction below. Matrices are row-major; all routines use deterministic
//! first-nonzero pivoting so canonical forms are reproducible.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::field::FieldElement;
use crate::ratfunc::RatFunc;

/// Field operations by reference, as needed by the elimination routines.
/// (`inv` returns `None` exactly on zero.)
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn ring_add(&self, rhs: &Self) -> Self;
    fn ring_sub(&self, rhs: &Self) -> Self;
    fn ring_mul(&self, rhs: &Self) -> Self;
    fn ring_neg(&self) -> Self;
    fn ring_inv(&self) -> Option<Self>;
}

impl Ring for FieldElement {
    fn zero_like(&self) -> Self {
        self.field().zero()
    }

    fn one_like(&self) -> Self {
        self.field().one()
    }

    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }

    fn ring_add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn ring_sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn ring_mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn ring_neg(&self) -> Self {
        -self
    }

    fn ring_inv(&self) -> Option<Self> {
        self.inv()
    }
}

impl Ring for RatFunc {
    fn zero_like(&self) -> Self {
        RatFunc::zero(self.field())
    }

    fn one_like(&self) -> Self {
        RatFunc::one(self.field())
    }

    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }

    fn ring_add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn ring_sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn ring_mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn ring_neg(&self) -> Self {
        -self
    }

    fn ring_inv(&self) -> Option<Self> {
        self.inv()
    }
}

/// Dense row-major matrix over a field-like scalar.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Matrix<T> {
        assert_eq!(rows * cols, data.len(), "matrix shape mismatch");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Matrix<T> {
        let r = rows.len();
        assert!(r > 0, "matrix needs at least one row");
        let c = rows[0].len();
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn zeros(rows: usize, cols: usize, exemplar: &T) -> Matrix<T> {
        Matrix {
            rows,
            cols,
            data: vec![exemplar.zero_like(); rows * cols],
        }
    }

    pub fn identity(n: usize, exemplar: &T) -> Matrix<T> {
        let mut m = Matrix::zeros(n, n, exemplar);
        for i in 0..n {
            m[(i, i)] = exemplar.one_like();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero_elem())
    }

    /// An arbitrary entry's zero, used to seed constructions.
    fn exemplar(&self) -> &T {
        &self.data[0]
    }

    pub fn map<F: FnMut(&T) -> T>(&self, mut f: F) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| f(e)).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix<T> {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn add(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.ring_add(b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.ring_sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Matrix<T> {
        self.map(|e| e.ring_mul(s))
    }

    pub fn matmul(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let zero = self.exemplar().zero_like();
        let mut out = Matrix::zeros(self.rows, rhs.cols, &zero);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero_elem() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)].ring_add(&a.ring_mul(&rhs[(l, j)]));
                }
            }
        }
        out
    }

    /// Matrix–vector product (vector as a slice of length `cols`).
    pub fn matvec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = self.exemplar().zero_like();
                for (a, b) in self.row(i).iter().zip(v) {
                    acc = acc.ring_add(&a.ring_mul(b));
                }
                acc
            })
            .collect()
    }

    pub fn hstack(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.rows, rhs.rows);
        let mut data = Vec::with_capacity(self.data.len() + rhs.data.len());
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(rhs.row(i));
        }
        Matrix {
            rows: self.rows,
            cols: self.cols + rhs.cols,
            data,
        }
    }

    pub fn vstack(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Matrix {
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn submatrix(&self, row_range: std::ops::Range<usize>, col_range: std::ops::Range<usize>) -> Matrix<T> {
        let mut data = vec![];
        for i in row_range.clone() {
            for j in col_range.clone() {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix {
            rows: row_range.len(),
            cols: col_range.len(),
            data,
        }
    }

    /// In-place reduced row echelon form. Returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = vec![];
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self[(i, c)].is_zero_elem()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = self[(r, c)].ring_inv().expect("pivot is nonzero");
            for j in c..self.cols {
                self[(r, j)] = self[(r, j)].ring_mul(&inv);
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero_elem() {
                    continue;
                }
                let factor = self[(i, c)].clone();
                for j in c..self.cols {
                    let delta = factor.ring_mul(&self[(r, j)]);
                    self[(i, j)] = self[(i, j)].ring_sub(&delta);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Matrix<T>, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Rows spanning the solution space of A·xᵀ = 0.
    /// The result has `cols - rank` rows (possibly zero) and `cols` columns.
    pub fn nullspace(&self) -> Matrix<T> {
        let zero = self.exemplar().zero_like();
        let one = self.exemplar().one_like();
        let (rr, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut rows = vec![];
        for &fc in &free {
            let mut v = vec![zero.clone(); self.cols];
            v[fc] = one.clone();
            for (pr, &pc) in pivots.iter().enumerate() {
                v[pc] = rr[(pr, fc)].ring_neg();
            }
            rows.push(v);
        }
        if rows.is_empty() {
            Matrix::zeros(0, self.cols, &zero)
        } else {
            Matrix::from_rows(rows)
        }
    }

    /// Solve A·X = B for X; `None` when inconsistent. Free variables are set
    /// to zero, making the solution deterministic.
    pub fn solve_right(&self, b: &Matrix<T>) -> Option<Matrix<T>> {
        assert_eq!(self.rows, b.rows, "right-hand side height mismatch");
        let aug = self.hstack(b);
        let (rr, pivots) = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None; // a pivot in the RHS block: inconsistent system
        }
        let zero = self.exemplar().zero_like();
        let mut x = Matrix::zeros(self.cols, b.cols, &zero);
        for (pr, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(pc, j)] = rr[(pr, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a square matrix");
        let zero = self.exemplar().zero_like();
        let mut m = self.clone();
        let mut det = self.exemplar().one_like();
        for c in 0..m.cols {
            let Some(pr) = (c..m.rows).find(|&i| !m[(i, c)].is_zero_elem()) else {
                return zero;
            };
            if pr != c {
                m.swap_rows(c, pr);
                det = det.ring_neg();
            }
            det = det.ring_mul(&m[(c, c)]);
            let inv = m[(c, c)].ring_inv().expect("pivot is nonzero");
            for i in c + 1..m.rows {
                if m[(i, c)].is_zero_elem() {
                    continue;
                }
                let factor = m[(i, c)].ring_mul(&inv);
                for j in c..m.cols {
                    let delta = factor.ring_mul(&m[(c, j)]);
                    m[(i, j)] = m[(i, j)].ring_sub(&delta);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix<T>> {
        assert_eq!(self.rows, self.cols);
        let id = Matrix::identity(self.rows, self.exemplar());
        let (rr, pivots) = self.hstack(&id).rref();
        if pivots.len() < self.rows {
            return None;
        }
        Some(rr.submatrix(0..self.rows, self.cols..2 * self.cols))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}
