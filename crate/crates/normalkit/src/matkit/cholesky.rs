//! Banded Cholesky for SPD matrices under their natural (banded)
//! ordering.  Stores both the lower factor and its transpose row-major,
//! so forward and backward sweeps both run on contiguous memory.

use super::{vecops, CsrMatrix, DenseMatrix, FactorSolve, MatError};

#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    n: usize,
    bw: usize,
    /// Row i holds L(i, i-bw..=i) at slot j - i + bw.
    lower: Vec<f64>,
    /// Row i holds Lᵀ(i, i..=i+bw) at slot j - i.
    upper: Vec<f64>,
}

impl CholeskyFactor {
    /// Factor a symmetric positive definite CSR matrix.  Symmetry is
    /// checked numerically (1e-12 relative) before any work happens.
    pub fn from_csr(a: &CsrMatrix) -> Result<Self, MatError> {
        if a.rows() != a.cols() {
            return Err(MatError::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        if !a.is_symmetric(1e-12) {
            let (i, j, x, y) = first_asymmetry(a);
            return Err(MatError::NotSymmetric { i, j, a: x, b: y });
        }
        let n = a.rows();
        let bw = a.bandwidth();
        let width = bw + 1;
        let mut band = vec![0.0f64; n * width];
        for (i, j, v) in a.entries() {
            if j <= i {
                band[i * width + (j + bw - i)] = v;
            }
        }
        Self::factor_band(n, bw, band)
    }

    /// Factor a dense SPD matrix through the same banded kernel
    /// (bandwidth n-1); used for desk-scale SPD factors.
    pub fn from_dense(a: &DenseMatrix) -> Result<Self, MatError> {
        if !a.is_square() {
            return Err(MatError::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        let n = a.rows();
        let scale = a.norm_max().max(1e-300);
        for i in 0..n {
            for j in 0..i {
                let (x, y) = (a.get(i, j), a.get(j, i));
                if (x - y).abs() > 1e-12 * scale {
                    return Err(MatError::NotSymmetric { i, j, a: x, b: y });
                }
            }
        }
        let bw = n.saturating_sub(1);
        let width = bw + 1;
        let mut band = vec![0.0f64; n * width];
        for i in 0..n {
            for j in 0..=i {
                band[i * width + (j + bw - i)] = a.get(i, j);
            }
        }
        Self::factor_band(n, bw, band)
    }

    fn factor_band(n: usize, bw: usize, mut band: Vec<f64>) -> Result<Self, MatError> {
        let w = bw + 1;
        for i in 0..n {
            let lo_i = i.saturating_sub(bw);
            for j in lo_i..=i {
                let lo_j = j.saturating_sub(bw);
                let kstart = lo_i.max(lo_j);
                let mut s = band[i * w + (j + bw - i)];
                if kstart < j {
                    let ri = &band[i * w + (kstart + bw - i)..i * w + (j + bw - i)];
                    let rj = &band[j * w + (kstart + bw - j)..j * w + (j + bw - j)];
                    s -= vecops::dot(ri, rj);
                }
                if i == j {
                    if s <= 0.0 || !s.is_finite() {
                        return Err(MatError::NotSpd { index: i, value: s });
                    }
                    band[i * w + bw] = s.sqrt();
                } else {
                    band[i * w + (j + bw - i)] = s / band[j * w + bw];
                }
            }
        }
        let mut upper = vec![0.0f64; n * w];
        for i in 0..n {
            for j in i..(i + bw + 1).min(n) {
                upper[i * w + (j - i)] = band[j * w + (i + bw - j)];
            }
        }
        Ok(Self { n, bw, lower: band, upper })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    /// Solve `A x = b` via the two triangular sweeps.
    pub fn solve_vec(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n, "solve dimension mismatch");
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        let (n, bw, w) = (self.n, self.bw, self.bw + 1);
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let row = &self.lower[i * w + (lo + bw - i)..i * w + bw];
            let mut s = x[i];
            s -= vecops::dot(row, &x[lo..i]);
            x[i] = s / self.lower[i * w + bw];
        }
        for i in (0..n).rev() {
            let hi = (i + bw + 1).min(n);
            let row = &self.upper[i * w + 1..i * w + (hi - i)];
            let mut s = x[i];
            s -= vecops::dot(row, &x[i + 1..hi]);
            x[i] = s / self.upper[i * w];
        }
    }

    /// Forward sweep only: solve `L y = b`.
    pub fn solve_lower(&self, b: &[f64]) -> Vec<f64> {
        let (n, bw, w) = (self.n, self.bw, self.bw + 1);
        let mut x = b.to_vec();
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let row = &self.lower[i * w + (lo + bw - i)..i * w + bw];
            let mut s = x[i];
            s -= vecops::dot(row, &x[lo..i]);
            x[i] = s / self.lower[i * w + bw];
        }
        x
    }

    /// Backward sweep only: solve `Lᵀ y = b`.
    pub fn solve_upper(&self, b: &[f64]) -> Vec<f64> {
        let (n, bw, w) = (self.n, self.bw, self.bw + 1);
        let mut x = b.to_vec();
        for i in (0..n).rev() {
            let hi = (i + bw + 1).min(n);
            let row = &self.upper[i * w + 1..i * w + (hi - i)];
            let mut s = x[i];
            s -= vecops::dot(row, &x[i + 1..hi]);
            x[i] = s / self.upper[i * w];
        }
        x
    }

    /// The lower factor as a dense matrix (tests and small dense work).
    pub fn lower_to_dense(&self) -> DenseMatrix {
        let w = self.bw + 1;
        let mut m = DenseMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in i.saturating_sub(self.bw)..=i {
                m.set(i, j, self.lower[i * w + (j + self.bw - i)]);
            }
        }
        m
    }
}

fn first_asymmetry(a: &CsrMatrix) -> (usize, usize, f64, f64) {
    let scale = a.norm_max().max(1e-300);
    for (i, j, v) in a.entries() {
        let w = a.get(j, i);
        if (v - w).abs() > 1e-12 * scale {
            return (i, j, v, w);
        }
    }
    (0, 0, 0.0, 0.0)
}

/// Solving with the factored SPD matrix itself: both directions coincide.
impl FactorSolve for CholeskyFactor {
    fn nrows(&self) -> usize {
        self.n
    }

    fn solve(&self, b: &[f64]) -> Result<Vec<f64>, MatError> {
        Ok(self.solve_vec(b))
    }

    fn solve_transpose(&self, b: &[f64]) -> Result<Vec<f64>, MatError> {
        Ok(self.solve_vec(b))
    }
}
