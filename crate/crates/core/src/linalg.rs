//! Exact dense linear algebra, generic over the scalar type.
//!
//! [`Mat`] works for any scalar implementing [`num_traits::Num`] (field
//! operations plus equality). Determinants and rank use fraction-free
//! Bareiss elimination, whose interior divisions are exact over any
//! integral domain, so integer scalars stay integers throughout. Kernel
//! computation row-reduces and therefore assumes field scalars; the crate
//! root exports [`crate::QMat`] over arbitrary-precision rationals for
//! that purpose.

use num_traits::Num;

/// Errors from matrix construction and shape mismatches.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("rows have unequal lengths")]
    RaggedRows,
    #[error("matrix is empty")]
    Empty,
    #[error("expected a square matrix, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("index {index} out of bounds for {len}")]
    IndexOutOfBounds { index: usize, len: usize },
}

/// A dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone + Num> Mat<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, LinalgError> {
        let Some(first) = rows.first() else {
            return Err(LinalgError::Empty);
        };
        let cols = first.len();
        if cols == 0 || rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::RaggedRows);
        }
        let nrows = rows.len();
        Ok(Mat { rows: nrows, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = T::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut T {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// The submatrix on the given row and column indices, in the given
    /// order. Indices may repeat; each must be in range.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Mat<T>, LinalgError> {
        for &r in rows {
            if r >= self.rows {
                return Err(LinalgError::IndexOutOfBounds { index: r, len: self.rows });
            }
        }
        for &c in cols {
            if c >= self.cols {
                return Err(LinalgError::IndexOutOfBounds { index: c, len: self.cols });
            }
        }
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                data.push(self.at(r, c).clone());
            }
        }
        Ok(Mat { rows: rows.len(), cols: cols.len(), data })
    }

    pub fn transpose(&self) -> Mat<T> {
        let mut out = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *out.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        out
    }

    pub fn matmul(&self, other: &Mat<T>) -> Result<Mat<T>, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::IndexOutOfBounds { index: other.rows, len: self.cols });
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = acc + self.at(r, k).clone() * other.at(k, c).clone();
                }
                *out.at_mut(r, c) = acc;
            }
        }
        Ok(out)
    }

    /// Determinant by fraction-free Bareiss elimination. Interior
    /// divisions are exact over an integral domain.
    pub fn det(&self) -> Result<T, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        let mut a = self.clone();
        let mut sign_flip = false;
        let mut prev = T::one();
        for k in 0..n - 1 {
            if a.at(k, k).is_zero() {
                let Some(swap) = (k + 1..n).find(|&r| !a.at(r, k).is_zero()) else {
                    return Ok(T::zero());
                };
                a.swap_rows(k, swap);
                sign_flip = !sign_flip;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a.at(i, j).clone() * a.at(k, k).clone()
                        - a.at(i, k).clone() * a.at(k, j).clone();
                    *a.at_mut(i, j) = num / prev.clone();
                }
                *a.at_mut(i, k) = T::zero();
            }
            prev = a.at(k, k).clone();
        }
        let d = a.at(n - 1, n - 1).clone();
        Ok(if sign_flip { T::zero() - d } else { d })
    }

    /// Rank by fraction-free elimination with full pivot search.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let (nr, nc) = (a.rows, a.cols);
        let mut prev = T::one();
        let mut r = 0;
        let mut c = 0;
        while r < nr && c < nc {
            let pivot = (r..nr).flat_map(|i| (c..nc).map(move |j| (i, j)))
                .find(|&(i, j)| !a.at(i, j).is_zero());
            let Some((pi, pj)) = pivot else { break };
            a.swap_rows(r, pi);
            a.swap_cols(c, pj);
            for i in r + 1..nr {
                for j in c + 1..nc {
                    let num = a.at(i, j).clone() * a.at(r, c).clone()
                        - a.at(i, c).clone() * a.at(r, j).clone();
                    *a.at_mut(i, j) = num / prev.clone();
                }
                *a.at_mut(i, c) = T::zero();
            }
            prev = a.at(r, c).clone();
            r += 1;
            c += 1;
        }
        r
    }

    /// Basis of the right kernel `{x : Ax = 0}` via reduced row echelon
    /// form. Assumes field scalars. The basis vectors are the standard
    /// free-variable solutions, ordered by free column.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let mut a = self.clone();
        let (nr, nc) = (a.rows, a.cols);
        let mut pivots: Vec<usize> = Vec::new();
        let mut r = 0;
        for c in 0..nc {
            let Some(pi) = (r..nr).find(|&i| !a.at(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(r, pi);
            let inv = T::one() / a.at(r, c).clone();
            for j in c..nc {
                let v = a.at(r, j).clone() * inv.clone();
                *a.at_mut(r, j) = v;
            }
            for i in 0..nr {
                if i != r && !a.at(i, c).is_zero() {
                    let f = a.at(i, c).clone();
                    for j in c..nc {
                        let v = a.at(i, j).clone() - f.clone() * a.at(r, j).clone();
                        *a.at_mut(i, j) = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == nr {
                break;
            }
        }
        let free: Vec<usize> = (0..nc).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut x = vec![T::zero(); nc];
                x[fc] = T::one();
                for (pr, &pc) in pivots.iter().enumerate() {
                    x[pc] = T::zero() - a.at(pr, fc).clone();
                }
                x
            })
            .collect()
    }

    /// Reduced row echelon form with zero rows dropped: the canonical
    /// basis of the row space. Two matrices with equal column counts span
    /// the same row space exactly when their canonical forms are equal,
    /// so callers comparing one matrix against many can canonicalize once
    /// instead of paying [`same_rowspace`] per pair. Assumes field scalars.
    pub fn row_canonical_form(&self) -> Mat<T> {
        let mut a = self.clone();
        let (nr, nc) = (a.rows, a.cols);
        let mut r = 0;
        for c in 0..nc {
            let Some(pi) = (r..nr).find(|&i| !a.at(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(r, pi);
            let inv = T::one() / a.at(r, c).clone();
            for j in c..nc {
                let v = a.at(r, j).clone() * inv.clone();
                *a.at_mut(r, j) = v;
            }
            for i in 0..nr {
                if i != r && !a.at(i, c).is_zero() {
                    let f = a.at(i, c).clone();
                    for j in c..nc {
                        let v = a.at(i, j).clone() - f.clone() * a.at(r, j).clone();
                        *a.at_mut(i, j) = v;
                    }
                }
            }
            r += 1;
            if r == nr {
                break;
            }
        }
        let mut out = Mat::zeros(r, nc);
        for i in 0..r {
            for j in 0..nc {
                *out.at_mut(i, j) = a.at(i, j).clone();
            }
        }
        out
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        if r1 == r2 {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(r1 * self.cols + c, r2 * self.cols + c);
        }
    }

    fn swap_cols(&mut self, c1: usize, c2: usize) {
        if c1 == c2 {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + c1, r * self.cols + c2);
        }
    }
}

/// Whether two matrices with the same column count span the same row
/// space. Assumes field scalars.
pub fn same_rowspace<T: Clone + Num>(a: &Mat<T>, b: &Mat<T>) -> bool {
    if a.cols() != b.cols() {
        return false;
    }
    let ra = a.rank();
    if ra != b.rank() {
        return false;
    }
    let mut stacked = Vec::with_capacity(a.rows() + b.rows());
    for r in 0..a.rows() {
        stacked.push(a.row(r).to_vec());
    }
    for r in 0..b.rows() {
        stacked.push(b.row(r).to_vec());
    }
    Mat::from_rows(stacked).map(|m| m.rank() == ra).unwrap_or(false)
}
