//! Row-major dense matrices, LU with partial pivoting, dense Cholesky,
//! and triangular solves.  Sized for desk-scale factor work (n ≤ a few
//! thousand); the PDE paths never densify.

use super::{vecops, FactorSolve, MatError};

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Build from row-major data; `data.len()` must equal `rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, MatError> {
        if data.len() != rows * cols {
            return Err(MatError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, entries: data })
    }

    /// Build from a slice of rows (convenient in tests).
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend_from_slice(row);
        }
        Self { rows: r, cols: c, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [f64] {
        &mut self.entries
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows).map(|i| vecops::dot(self.row(i), x)).collect()
    }

    /// `y = Aᵀ x`.
    pub fn matvec_transpose(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.rows, "matvec_transpose dimension mismatch");
        let mut y = vec![0.0; self.cols];
        for i in 0..self.rows {
            vecops::axpy(x[i], self.row(i), &mut y);
        }
        y
    }

    /// `C = A B`, accumulated row by row so the inner loop stays contiguous.
    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut c = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let a_row = self.row(i);
            let c_row = c.row_mut(i);
            for (k, &aik) in a_row.iter().enumerate() {
                if aik != 0.0 {
                    vecops::axpy(aik, other.row(k), c_row);
                }
            }
        }
        c
    }

    /// `C = Aᵀ B` without forming the transpose.
    pub fn matmul_transpose_left(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.rows, other.rows, "matmul_transpose_left dimension mismatch");
        let mut c = DenseMatrix::zeros(self.cols, other.cols);
        for k in 0..self.rows {
            let a_row = self.row(k);
            let b_row = other.row(k);
            for (i, &aki) in a_row.iter().enumerate() {
                if aki != 0.0 {
                    vecops::axpy(aki, b_row, c.row_mut(i));
                }
            }
        }
        c
    }

    pub fn add(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn scaled(&self, alpha: f64) -> DenseMatrix {
        let entries = self.entries.iter().map(|a| a * alpha).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn norm_fro(&self) -> f64 {
        vecops::norm2(&self.entries)
    }

    /// Largest absolute entry.
    pub fn norm_max(&self) -> f64 {
        self.entries.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// `‖AᵀA − I‖` in the max-entry norm; the orthogonality defect.
    pub fn orthogonality_defect(&self) -> f64 {
        let mut defect = 0.0f64;
        for i in 0..self.cols {
            for j in i..self.cols {
                let mut s = 0.0;
                for k in 0..self.rows {
                    s += self.get(k, i) * self.get(k, j);
                }
                if i == j {
                    s -= 1.0;
                }
                defect = defect.max(s.abs());
            }
        }
        defect
    }

    /// Inverse via Gauss–Jordan with partial pivoting on `[A | I]`.
    ///
    /// Row operations act on contiguous memory, which keeps the Newton
    /// polar iteration at n = 1000 inside its time budget.
    pub fn inverse(&self) -> Result<DenseMatrix, MatError> {
        if !self.is_square() {
            return Err(MatError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let w = 2 * n;
        let mut aug = vec![0.0f64; n * w];
        for i in 0..n {
            aug[i * w..i * w + n].copy_from_slice(self.row(i));
            aug[i * w + n + i] = 1.0;
        }
        let scale = self.norm_max().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let mut piv = k;
            let mut best = aug[k * w + k].abs();
            for i in k + 1..n {
                let v = aug[i * w + k].abs();
                if v > best {
                    best = v;
                    piv = i;
                }
            }
            if best <= 1e-300 || best <= 1e-15 * scale {
                return Err(MatError::PivotBreakdown { index: k, pivot: best });
            }
            if piv != k {
                let (lo, hi) = aug.split_at_mut(piv * w);
                lo[k * w..k * w + w].swap_with_slice(&mut hi[..w]);
            }
            let inv_p = 1.0 / aug[k * w + k];
            for v in aug[k * w + k..k * w + w].iter_mut() {
                *v *= inv_p;
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let m = aug[i * w + k];
                if m == 0.0 {
                    continue;
                }
                let (row_k, row_i) = if i > k {
                    let (lo, hi) = aug.split_at_mut(i * w);
                    (&lo[k * w..k * w + w], &mut hi[..w])
                } else {
                    let (lo, hi) = aug.split_at_mut(k * w);
                    let row_i = &mut lo[i * w..i * w + w];
                    (&hi[..w], row_i)
                };
                for (a, b) in row_i[k..].iter_mut().zip(&row_k[k..]) {
                    *a -= m * b;
                }
            }
        }
        let mut inv = DenseMatrix::zeros(n, n);
        for i in 0..n {
            inv.row_mut(i).copy_from_slice(&aug[i * w + n..i * w + w]);
        }
        Ok(inv)
    }

    /// LU factorization with partial pivoting.
    pub fn lu(&self) -> Result<DenseLu, MatError> {
        DenseLu::new(self)
    }
}

/// LU factorization `P A = L U` with partial pivoting (row swaps stored
/// LAPACK-style as successive pivot indices).
#[derive(Debug, Clone)]
pub struct DenseLu {
    lu: DenseMatrix,
    piv: Vec<usize>,
}

impl DenseLu {
    pub fn new(a: &DenseMatrix) -> Result<Self, MatError> {
        if !a.is_square() {
            return Err(MatError::NotSquare { rows: a.rows, cols: a.cols });
        }
        let n = a.rows;
        let mut lu = a.clone();
        let mut piv = vec![0usize; n];
        let scale = a.norm_max().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let mut p = k;
            let mut best = lu.get(k, k).abs();
            for i in k + 1..n {
                let v = lu.get(i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            piv[k] = p;
            if best <= 1e-300 || best <= 1e-15 * scale {
                return Err(MatError::PivotBreakdown { index: k, pivot: best });
            }
            if p != k {
                let (lo, hi) = lu.entries.split_at_mut(p * n);
                lo[k * n..(k + 1) * n].swap_with_slice(&mut hi[..n]);
            }
            let inv_p = 1.0 / lu.get(k, k);
            for i in k + 1..n {
                let m = lu.get(i, k) * inv_p;
                lu.set(i, k, m);
                if m != 0.0 {
                    let (row_k, row_i) = {
                        let (lo, hi) = lu.entries.split_at_mut(i * n);
                        (&lo[k * n..(k + 1) * n], &mut hi[..n])
                    };
                    for (a, b) in row_i[k + 1..].iter_mut().zip(&row_k[k + 1..]) {
                        *a -= m * b;
                    }
                }
            }
        }
        Ok(Self { lu, piv })
    }

    pub fn n(&self) -> usize {
        self.lu.rows
    }

    /// Solve `A x = b`.
    pub fn solve_vec(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(b.len(), n);
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
        }
        for i in 1..n {
            let s = vecops::dot(&self.lu.row(i)[..i], &x[..i]);
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s = vecops::dot(&self.lu.row(i)[i + 1..], &x[i + 1..]);
            x[i] = (x[i] - s) / self.lu.get(i, i);
        }
        x
    }

    /// Solve `Aᵀ x = b` using the same factorization.
    pub fn solve_transpose_vec(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(b.len(), n);
        let mut x = b.to_vec();
        // Aᵀ = Uᵀ Lᵀ P̂, so solve Uᵀ y = b, then Lᵀ z = y, then undo swaps.
        for i in 0..n {
            let mut s = x[i];
            for k in 0..i {
                s -= self.lu.get(k, i) * x[k];
            }
            x[i] = s / self.lu.get(i, i);
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= self.lu.get(k, i) * x[k];
            }
            x[i] = s;
        }
        for k in (0..n).rev() {
            x.swap(k, self.piv[k]);
        }
        x
    }
}

impl FactorSolve for DenseLu {
    fn nrows(&self) -> usize {
        self.n()
    }

    fn solve(&self, b: &[f64]) -> Result<Vec<f64>, MatError> {
        Ok(self.solve_vec(b))
    }

    fn solve_transpose(&self, b: &[f64]) -> Result<Vec<f64>, MatError> {
        Ok(self.solve_transpose_vec(b))
    }
}

/// Dense Cholesky `A = L Lᵀ`; returns the lower factor.
pub fn cholesky_dense(a: &DenseMatrix) -> Result<DenseMatrix, MatError> {
    if !a.is_square() {
        return Err(MatError::NotSquare { rows: a.rows, cols: a.cols });
    }
    let n = a.rows;
    let mut l = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = a.get(i, j);
            // Both slices are row prefixes, so this stays contiguous.
            let (ri, rj) = (l.row(i), l.row(j));
            s -= vecops::dot(&ri[..j], &rj[..j]);
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return Err(MatError::NotSpd { index: i, value: s });
                }
                l.set(i, i, s.sqrt());
            } else {
                l.set(i, j, s / l.get(j, j));
            }
        }
    }
    Ok(l)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpLo {
    Upper,
    Lower,
}

/// A dense triangular matrix acting as a solvable factor.
#[derive(Debug, Clone)]
pub struct DenseTriangular {
    m: DenseMatrix,
    uplo: UpLo,
}

impl DenseTriangular {
    pub fn new(m: DenseMatrix, uplo: UpLo) -> Result<Self, MatError> {
        if !m.is_square() {
            return Err(MatError::NotSquare { rows: m.rows, cols: m.cols });
        }
        Ok(Self { m, uplo })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.m
    }

    fn check_diag(&self, i: usize) -> Result<f64, MatError> {
        let d = self.m.get(i, i);
        if d == 0.0 || !d.is_finite() {
            return Err(MatError::PivotBreakdown { index: i, pivot: d.abs() });
        }
        Ok(d)
    }

    fn solve_lower(&self, b: &[f64], transposed: bool) -> Result<Vec<f64>, MatError> {
        let n = self.m.rows;
        let mut x = b.to_vec();
        if !transposed {
            for i in 0..n {
                let s = vecops::dot(&self.m.row(i)[..i], &x[..i]);
                x[i] = (x[i] - s) / self.check_diag(i)?;
            }
        } else {
            for i in (0..n).rev() {
                let mut s = x[i];
                for k in i + 1..n {
                    s -= self.m.get(k, i) * x[k];
                }
                x[i] = s / self.check_diag(i)?;
            }
        }
        Ok(x)
    }

    fn solve_upper(&self, b: &[f64], transposed: bool) -> Result<Vec<f64>, MatError> {
        let n = self.m.rows;
        let mut x = b.to_vec();
        if !transposed {
            for i in (0..n).rev() {
                let s = vecops::dot(&self.m.row(i)[i + 1..], &x[i + 1..]);
                x[i] = (x[i] - s) / self.check_diag(i)?;
            }
        } else {
            for i in 0..n {
                let mut s = x[i];
                for k in 0..i {
                    s -= self.m.get(k, i) * x[k];
                }
                x[i] = s / self.check_diag(i)?;
            }
        }
        Ok(x)
    }
}

impl FactorSolve for DenseTriangular {
    fn nrows(&self) -> usize {
        self.m.rows
    }

    fn solve(&self, b: &[f64]) -> Result<Vec<f64>, MatError> {
        match self.uplo {
            UpLo::Lower => self.solve_lower(b, false),
            UpLo::Upper => self.solve_upper(b, false),
        }
    }

    fn solve_transpose(&self, b: &[f64]) -> Result<Vec<f64>, MatError> {
        match self.uplo {
            UpLo::Lower => self.solve_lower(b, true),
            UpLo::Upper => self.solve_upper(b, true),
        }
    }
}
