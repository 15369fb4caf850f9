use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{FieldElement, FiniteField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixError {
    DimensionMismatch { expected: (usize, usize), found: (usize, usize) },
    NotSquare { rows: usize, cols: usize },
    EntryOutOfField(u32),
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {}x{}, found {}x{}", expected.0, expected.1, found.0, found.1)
            }
            MatrixError::NotSquare { rows, cols } => write!(f, "{rows}x{cols} matrix is not square"),
            MatrixError::EntryOutOfField(c) => write!(f, "entry {c} is not a field element"),
        }
    }
}

/// A dense row-major matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<'f> {
    field: &'f FiniteField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl<'f> Matrix<'f> {
    pub fn zeros(field: &'f FiniteField, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &'f FiniteField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(field: &'f FiniteField, rows: &[Vec<u32>]) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(MatrixError::DimensionMismatch {
                    expected: (rows.len(), cols),
                    found: (rows.len(), r.len()),
                });
            }
            for &c in r {
                if c >= field.q() {
                    return Err(MatrixError::EntryOutOfField(c));
                }
                data.push(c);
            }
        }
        Ok(Matrix { field, rows: rows.len(), cols, data })
    }

    /// Builds a matrix whose columns are the given vectors (all length `rows`).
    pub fn from_columns(field: &'f FiniteField, rows: usize, columns: &[&[u32]]) -> Result<Self, MatrixError> {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(MatrixError::DimensionMismatch { expected: (rows, 1), found: (c.len(), 1) });
            }
            for (i, &x) in c.iter().enumerate() {
                if x >= field.q() {
                    return Err(MatrixError::EntryOutOfField(x));
                }
                m.data[i * m.cols + j] = x;
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &'f FiniteField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement<'f> {
        self.field.element(self.data[i * self.cols + j])
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        assert!(v < self.field.q());
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[u32]>::to_vec).collect()
    }

    /// The submatrix on the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix<'f> {
        let mut m = Self::zeros(self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                m.data[i * cols.len() + jj] = self.data[i * self.cols + j];
            }
        }
        m
    }

    pub fn mul(&self, other: &Matrix<'f>) -> Result<Matrix<'f>, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch {
                expected: (self.cols, other.cols),
                found: (other.rows, other.cols),
            });
        }
        let f = self.field;
        let mut m = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0;
                for t in 0..self.cols {
                    acc = f.add(acc, f.mul(self.data[i * self.cols + t], other.data[t * other.cols + j]));
                }
                m.data[i * other.cols + j] = acc;
            }
        }
        Ok(m)
    }

    /// Row-reduces in place; returns the pivot columns and the product of
    /// row-swap signs and pivots (the determinant factor for square input).
    fn eliminate(&mut self) -> (Vec<usize>, u32) {
        let f = self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut det = 1;
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
                det = f.neg(det);
            }
            let pv = self.data[r * cols + c];
            det = f.mul(det, pv);
            let inv = f.inv(pv).expect("nonzero pivot");
            for j in 0..cols {
                self.data[r * cols + j] = f.mul(self.data[r * cols + j], inv);
            }
            for i in 0..rows {
                let factor = self.data[i * cols + c];
                if i == r || factor == 0 {
                    continue;
                }
                for j in 0..cols {
                    let sub = f.mul(factor, self.data[r * cols + j]);
                    self.data[i * cols + j] = f.sub(self.data[i * cols + j], sub);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (pivots, det)
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate().0.len()
    }

    pub fn det(&self) -> Result<FieldElement<'f>, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let (pivots, det) = self.clone().eliminate();
        let d = if pivots.len() == self.rows { det } else { 0 };
        Ok(self.field.element(d))
    }

    /// Some `x` with `self * x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>, MatrixError> {
        if b.len() != self.rows {
            return Err(MatrixError::DimensionMismatch { expected: (self.rows, 1), found: (b.len(), 1) });
        }
        let mut aug = Self::zeros(self.field, self.rows, self.cols + 1);
        for (i, &bi) in b.iter().enumerate() {
            for j in 0..self.cols {
                aug.data[i * (self.cols + 1) + j] = self.data[i * self.cols + j];
            }
            aug.data[i * (self.cols + 1) + self.cols] = bi;
        }
        let (pivots, _) = aug.eliminate();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.data[r * (self.cols + 1) + self.cols];
        }
        Ok(Some(x))
    }

    /// Whether `w` lies in the span of this matrix's columns.
    pub fn in_span(&self, w: &[u32]) -> Result<bool, MatrixError> {
        if w.len() != self.rows {
            return Err(MatrixError::DimensionMismatch { expected: (self.rows, 1), found: (w.len(), 1) });
        }
        let mut cols: Vec<Vec<u32>> = (0..self.cols).map(|j| self.column(j)).collect();
        let before = self.rank();
        cols.push(w.to_vec());
        let refs: Vec<&[u32]> = cols.iter().map(Vec::as_slice).collect();
        let ext = Matrix::from_columns(self.field, self.rows, &refs)?;
        Ok(ext.rank() == before)
    }
}
