//! Dense and sparse integer matrices.

use std::fmt;

use super::LinalgError;

/// Dense row-major integer matrix. Acts on column vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntegerMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend_from_slice(row);
        }
        IntegerMatrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> Result<IntegerMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b == 0 {
                        continue;
                    }
                    let cur = out.get(r, c);
                    let v = a
                        .checked_mul(b)
                        .and_then(|p| p.checked_add(cur))
                        .ok_or(LinalgError::Overflow)?;
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>, LinalgError> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![0i64; self.rows];
        for (r, o) in out.iter_mut().enumerate() {
            let mut acc: i64 = 0;
            for (c, &x) in v.iter().enumerate() {
                let a = self.get(r, c);
                if a != 0 && x != 0 {
                    acc = a
                        .checked_mul(x)
                        .and_then(|p| p.checked_add(acc))
                        .ok_or(LinalgError::Overflow)?;
                }
            }
            *o = acc;
        }
        Ok(out)
    }

    /// Submatrix of the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntegerMatrix {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c));
            }
        }
        out
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `row[dst] += k * row[src]`.
    pub(crate) fn add_row(&mut self, dst: usize, src: usize, k: i64) -> Result<(), LinalgError> {
        if k == 0 {
            return Ok(());
        }
        for c in 0..self.cols {
            let s = self.get(src, c);
            if s != 0 {
                let v = s
                    .checked_mul(k)
                    .and_then(|p| p.checked_add(self.get(dst, c)))
                    .ok_or(LinalgError::Overflow)?;
                self.set(dst, c, v);
            }
        }
        Ok(())
    }

    /// `col[dst] += k * col[src]`.
    pub(crate) fn add_col(&mut self, dst: usize, src: usize, k: i64) -> Result<(), LinalgError> {
        if k == 0 {
            return Ok(());
        }
        for r in 0..self.rows {
            let s = self.get(r, src);
            if s != 0 {
                let v = s
                    .checked_mul(k)
                    .and_then(|p| p.checked_add(self.get(r, dst)))
                    .ok_or(LinalgError::Overflow)?;
                self.set(r, dst, v);
            }
        }
        Ok(())
    }

    pub(crate) fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let i = r * self.cols + c;
            self.data[i] = -self.data[i];
        }
    }

    pub(crate) fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let i = r * self.cols + c;
            self.data[i] = -self.data[i];
        }
    }
}

/// Column-compressed sparse integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Entries with the same position are summed; zeros are dropped.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, i64)]) -> Self {
        let mut columns: Vec<Vec<(usize, i64)>> = vec![Vec::new(); cols];
        for &(r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry out of range");
            columns[c].push((r, v));
        }
        for col in columns.iter_mut() {
            col.sort_unstable_by_key(|e| e.0);
            let mut merged: Vec<(usize, i64)> = Vec::with_capacity(col.len());
            for &(r, v) in col.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == r => last.1 += v,
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|e| e.1 != 0);
            *col = merged;
        }
        SparseMatrix { rows, cols, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> &[(usize, i64)] {
        &self.columns[c]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn to_dense(&self) -> IntegerMatrix {
        let mut d = IntegerMatrix::zeros(self.rows, self.cols);
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                d.set(r, c, v);
            }
        }
        d
    }

    pub fn from_dense(m: &IntegerMatrix) -> Self {
        let mut columns = vec![Vec::new(); m.cols()];
        for (c, col) in columns.iter_mut().enumerate() {
            for r in 0..m.rows() {
                let v = m.get(r, c);
                if v != 0 {
                    col.push((r, v));
                }
            }
        }
        SparseMatrix {
            rows: m.rows(),
            cols: m.cols(),
            columns,
        }
    }

    pub fn transpose(&self) -> Self {
        let mut trip = Vec::with_capacity(self.nnz());
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                trip.push((c, r, v));
            }
        }
        Self::from_triplets(self.cols, self.rows, &trip)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>, LinalgError> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![0i64; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            let x = v[c];
            if x == 0 {
                continue;
            }
            for &(r, a) in col {
                out[r] = a
                    .checked_mul(x)
                    .and_then(|p| p.checked_add(out[r]))
                    .ok_or(LinalgError::Overflow)?;
            }
        }
        Ok(out)
    }

    /// `self * other`; errors on shape mismatch or overflow.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut trip = Vec::new();
        for (c, col) in other.columns.iter().enumerate() {
            let mut acc: std::collections::BTreeMap<usize, i64> = Default::default();
            for &(k, b) in col {
                for &(r, a) in &self.columns[k] {
                    let e = acc.entry(r).or_insert(0);
                    *e = a
                        .checked_mul(b)
                        .and_then(|p| p.checked_add(*e))
                        .ok_or(LinalgError::Overflow)?;
                }
            }
            trip.extend(acc.into_iter().filter(|e| e.1 != 0).map(|(r, v)| (r, c, v)));
        }
        Ok(Self::from_triplets(self.rows, other.cols, &trip))
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }
}
