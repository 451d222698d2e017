//! Small dense exact linear algebra.
//!
//! Matrices are row-major over a single field. Zero-row and zero-column
//! shapes are legal; they arise from rank-zero fibers. Pivoting is
//! deterministic (first nonzero in column order), so every result is
//! reproducible bit for bit.

use crate::error::{Error, Result};
use crate::scalar::{FieldTag, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldTag,
    entries: Vec<Scalar>,
}

/// Output of [`rref`]: the reduced matrix, its rank and pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    /// Builds a matrix from rows, checking the shape is rectangular and all
    /// entries share one field.
    pub fn from_rows(field: FieldTag, data: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(rows * cols);
        for row in data {
            if row.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "ragged rows: expected {cols} columns, found {}",
                    row.len()
                )));
            }
            for e in row {
                if e.field() != field {
                    return Err(Error::FieldMismatch);
                }
                entries.push(e);
            }
        }
        Ok(Matrix {
            rows,
            cols,
            field,
            entries,
        })
    }

    /// Builds a matrix from integer rows.
    pub fn from_int_rows(field: FieldTag, data: &[&[i64]]) -> Matrix {
        let rows = data
            .iter()
            .map(|r| r.iter().map(|&n| Scalar::from_integer(n, field)).collect())
            .collect();
        Matrix::from_rows(field, rows).expect("integer rows are well-formed")
    }

    pub fn zeros(field: FieldTag, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            field,
            entries: vec![Scalar::zero(field); rows * cols],
        }
    }

    pub fn identity(field: FieldTag, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one(field));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.field(), self.field, "field mismatch");
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    /// True when the shape has no entries at all.
    pub fn is_empty_shape(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} plus {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            entries,
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            entries: self.entries.iter().map(Scalar::neg).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Result<Matrix> {
        if c.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            entries: self.entries.iter().map(|e| e.mul(c)).collect(),
        })
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "hstack {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + other.cols);
        out.paste(0, 0, self);
        out.paste(0, self.cols, other);
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "vstack {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows + other.rows, self.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, 0, other);
        Ok(out)
    }

    /// Copies `block` into this matrix with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    /// The submatrix picking the given columns, in order.
    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, cols.len());
        for (jj, &j) in cols.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    /// The submatrix picking the given rows, in order.
    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, rows.len(), self.cols);
        for (ii, &i) in rows.iter().enumerate() {
            for j in 0..self.cols {
                out.set(ii, j, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        rref(self).expect("well-formed matrix").rank
    }

    /// Basis of the null space; columns count `cols - rank`.
    pub fn kernel_basis(&self) -> Matrix {
        let r = rref(self).expect("well-formed matrix");
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &pc) in r.pivots.iter().enumerate() {
                v[pc] = Some(row);
            }
            v
        };
        let free: Vec<usize> = (0..self.cols)
            .filter(|j| pivot_of_col[*j].is_none())
            .collect();
        let mut out = Matrix::zeros(self.field, self.cols, free.len());
        for (jj, &fj) in free.iter().enumerate() {
            out.set(fj, jj, Scalar::one(self.field));
            for (row, &pc) in r.pivots.iter().enumerate() {
                out.set(pc, jj, r.reduced.get(row, fj).neg());
            }
        }
        out
    }

    /// Deterministic solve of `self * x = rhs`; free variables are set to
    /// zero. Returns `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &Matrix) -> Result<Option<Matrix>> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        if self.rows != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "solve {}x{} against rhs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let aug = self.hstack(rhs)?;
        let r = rref(&aug)?;
        for &p in &r.pivots {
            if p >= self.cols {
                return Ok(None);
            }
        }
        let mut x = Matrix::zeros(self.field, self.cols, rhs.cols);
        for (row, &pc) in r.pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, r.reduced.get(row, self.cols + j).clone());
            }
        }
        Ok(Some(x))
    }

    /// Exact inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Result<Option<Matrix>> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "inverse of {}x{}",
                self.rows, self.cols
            )));
        }
        let id = Matrix::identity(self.field, self.rows);
        match self.solve(&id)? {
            Some(x) => {
                if self.rank() == self.rows {
                    Ok(Some(x))
                } else {
                    Ok(None)
                }
            }
            None => Ok(None),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = &Scalar> {
        self.entries.iter()
    }
}

/// Reduced row echelon form with deterministic pivoting.
pub fn rref(m: &Matrix) -> Result<Rref> {
    for e in &m.entries {
        if e.field() != m.field {
            return Err(Error::FieldMismatch);
        }
    }
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut pivot_row = 0usize;
    for col in 0..a.cols {
        if pivot_row >= a.rows {
            break;
        }
        let found = (pivot_row..a.rows).find(|&r| !a.get(r, col).is_zero());
        let Some(src) = found else { continue };
        if src != pivot_row {
            for j in 0..a.cols {
                let x = a.get(src, j).clone();
                let y = a.get(pivot_row, j).clone();
                a.set(src, j, y);
                a.set(pivot_row, j, x);
            }
        }
        let inv = a
            .get(pivot_row, col)
            .inv()
            .expect("pivot is nonzero by selection");
        for j in col..a.cols {
            let v = a.get(pivot_row, j).mul(&inv);
            a.set(pivot_row, j, v);
        }
        for r in 0..a.rows {
            if r == pivot_row {
                continue;
            }
            let factor = a.get(r, col).clone();
            if factor.is_zero() {
                continue;
            }
            for j in col..a.cols {
                let v = a.get(r, j).sub(&factor.mul(a.get(pivot_row, j)));
                a.set(r, j, v);
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    let rank = pivots.len();
    Ok(Rref {
        reduced: a,
        rank,
        pivots,
    })
}
