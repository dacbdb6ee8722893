//! Compressed sparse row storage for assembled PDE operators.

use super::{DenseMatrix, MatError};

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Build from (row, col, value) triplets.  Triplets may arrive in any
    /// order; duplicate coordinates are rejected rather than summed so
    /// accidental double-assembly cannot hide.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        mut triplets: Vec<(usize, usize, f64)>,
    ) -> Result<Self, MatError> {
        for &(i, j, _) in &triplets {
            if i >= rows || j >= cols {
                return Err(MatError::Invalid(format!(
                    "entry ({i}, {j}) outside a {rows}x{cols} matrix"
                )));
            }
        }
        triplets.sort_by_key(|&(i, j, _)| (i, j));
        for w in triplets.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(MatError::Invalid(format!(
                    "duplicate entry at ({}, {})",
                    w[0].0, w[0].1
                )));
            }
        }
        let mut row_ptr = vec![0usize; rows + 1];
        for &(i, _, _) in &triplets {
            row_ptr[i + 1] += 1;
        }
        for i in 0..rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        let col_idx = triplets.iter().map(|&(_, j, _)| j).collect();
        let values = triplets.iter().map(|&(_, _, v)| v).collect();
        Ok(Self { rows, cols, row_ptr, col_idx, values })
    }

    /// Build from triplets, summing entries that share a coordinate.
    /// This is the constructor for element-by-element assembly, where
    /// every shared vertex receives one contribution per element.
    pub fn from_triplets_summed(
        rows: usize,
        cols: usize,
        mut triplets: Vec<(usize, usize, f64)>,
    ) -> Result<Self, MatError> {
        for &(i, j, _) in &triplets {
            if i >= rows || j >= cols {
                return Err(MatError::Invalid(format!(
                    "entry ({i}, {j}) outside a {rows}x{cols} matrix"
                )));
            }
        }
        triplets.sort_by_key(|&(i, j, _)| (i, j));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len());
        for (i, j, v) in triplets {
            match merged.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += v,
                _ => merged.push((i, j, v)),
            }
        }
        Self::from_triplets(rows, cols, merged)
    }

    /// Build from per-row (column, value) lists that are already sorted by
    /// column with unique columns, the shape FEM assembly produces.
    pub fn from_sorted_rows(cols: usize, rows: Vec<Vec<(usize, f64)>>) -> Self {
        let nrows = rows.len();
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        row_ptr.push(0usize);
        let nnz: usize = rows.iter().map(|r| r.len()).sum();
        let mut col_idx = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        for row in &rows {
            debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0), "unsorted row");
            for &(j, v) in row {
                debug_assert!(j < cols);
                col_idx.push(j);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        Self { rows: nrows, cols, row_ptr, col_idx, values }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// (column indices, values) of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        (&self.col_idx[lo..hi], &self.values[lo..hi])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(p) => vals[p],
            Err(_) => 0.0,
        }
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    /// Largest |i - j| over stored entries.
    pub fn bandwidth(&self) -> usize {
        let mut bw = 0usize;
        for i in 0..self.rows {
            let (cols, _) = self.row(i);
            for &j in cols {
                bw = bw.max(i.abs_diff(j));
            }
        }
        bw
    }

    pub fn norm_max(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, alpha: f64) -> CsrMatrix {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= alpha;
        }
        out
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        let mut y = vec![0.0; self.rows];
        for i in 0..self.rows {
            let (cols, vals) = self.row(i);
            let mut s = 0.0;
            for (j, v) in cols.iter().zip(vals) {
                s += v * x[*j];
            }
            y[i] = s;
        }
        y
    }

    /// `y = Aᵀ x`.
    pub fn matvec_transpose(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.rows, "matvec_transpose dimension mismatch");
        let mut y = vec![0.0; self.cols];
        for i in 0..self.rows {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            let (cols, vals) = self.row(i);
            for (j, v) in cols.iter().zip(vals) {
                y[*j] += v * xi;
            }
        }
        y
    }

    pub fn transpose(&self) -> CsrMatrix {
        let mut counts = vec![0usize; self.cols + 1];
        for &j in &self.col_idx {
            counts[j + 1] += 1;
        }
        for j in 0..self.cols {
            counts[j + 1] += counts[j];
        }
        let row_ptr = counts.clone();
        let mut col_idx = vec![0usize; self.nnz()];
        let mut values = vec![0.0f64; self.nnz()];
        let mut next = counts;
        for i in 0..self.rows {
            let (cols, vals) = self.row(i);
            for (j, v) in cols.iter().zip(vals) {
                let slot = next[*j];
                col_idx[slot] = i;
                values[slot] = *v;
                next[*j] += 1;
            }
        }
        CsrMatrix { rows: self.cols, cols: self.rows, row_ptr, col_idx, values }
    }

    /// `C = A B`; rows are accumulated through a dense scratch vector and
    /// emitted in sorted column order, so the result is deterministic.
    pub fn matmul(&self, other: &CsrMatrix) -> Result<CsrMatrix, MatError> {
        if self.cols != other.rows {
            return Err(MatError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut acc = vec![0.0f64; other.cols];
        let mut mark = vec![false; other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut rows_out: Vec<Vec<(usize, f64)>> = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let (cols, vals) = self.row(i);
            for (k, a) in cols.iter().zip(vals) {
                let (bcols, bvals) = other.row(*k);
                for (j, b) in bcols.iter().zip(bvals) {
                    if !mark[*j] {
                        mark[*j] = true;
                        touched.push(*j);
                    }
                    acc[*j] += a * b;
                }
            }
            touched.sort_unstable();
            let mut row: Vec<(usize, f64)> = Vec::with_capacity(touched.len());
            for &j in &touched {
                row.push((j, acc[j]));
                acc[j] = 0.0;
                mark[j] = false;
            }
            touched.clear();
            rows_out.push(row);
        }
        Ok(CsrMatrix::from_sorted_rows(other.cols, rows_out))
    }

    /// `alpha * A + beta * B` with a row-merge of the two patterns.
    pub fn linear_combination(
        alpha: f64,
        a: &CsrMatrix,
        beta: f64,
        b: &CsrMatrix,
    ) -> Result<CsrMatrix, MatError> {
        if (a.rows, a.cols) != (b.rows, b.cols) {
            return Err(MatError::DimensionMismatch(format!(
                "{}x{} plus {}x{}",
                a.rows, a.cols, b.rows, b.cols
            )));
        }
        let mut rows_out: Vec<Vec<(usize, f64)>> = Vec::with_capacity(a.rows);
        for i in 0..a.rows {
            let (ac, av) = a.row(i);
            let (bc, bv) = b.row(i);
            let mut row = Vec::with_capacity(ac.len() + bc.len());
            let (mut p, mut q) = (0usize, 0usize);
            while p < ac.len() || q < bc.len() {
                let ja = if p < ac.len() { ac[p] } else { usize::MAX };
                let jb = if q < bc.len() { bc[q] } else { usize::MAX };
                if ja < jb {
                    row.push((ja, alpha * av[p]));
                    p += 1;
                } else if jb < ja {
                    row.push((jb, beta * bv[q]));
                    q += 1;
                } else {
                    row.push((ja, alpha * av[p] + beta * bv[q]));
                    p += 1;
                    q += 1;
                }
            }
            rows_out.push(row);
        }
        Ok(CsrMatrix::from_sorted_rows(a.cols, rows_out))
    }

    /// Check numerical symmetry: every `(i, j)` entry must match `(j, i)`
    /// within `tol` relative to the largest stored entry.
    pub fn symmetry_defect(&self) -> f64 {
        let t = self.transpose();
        let mut defect = 0.0f64;
        for i in 0..self.rows {
            let (c1, v1) = self.row(i);
            let (c2, v2) = t.row(i);
            let (mut p, mut q) = (0usize, 0usize);
            while p < c1.len() || q < c2.len() {
                let ja = if p < c1.len() { c1[p] } else { usize::MAX };
                let jb = if q < c2.len() { c2[q] } else { usize::MAX };
                if ja < jb {
                    defect = defect.max(v1[p].abs());
                    p += 1;
                } else if jb < ja {
                    defect = defect.max(v2[q].abs());
                    q += 1;
                } else {
                    defect = defect.max((v1[p] - v2[q]).abs());
                    p += 1;
                    q += 1;
                }
            }
        }
        defect
    }

    pub fn is_symmetric(&self, rel_tol: f64) -> bool {
        self.rows == self.cols && self.symmetry_defect() <= rel_tol * self.norm_max().max(1e-300)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            let (cols, vals) = self.row(i);
            for (j, v) in cols.iter().zip(vals) {
                m.set(i, *j, *v);
            }
        }
        m
    }

    /// Iterate stored entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(j, v)| (i, *j, *v))
        })
    }
}
