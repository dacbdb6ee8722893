//! Tridiagonal storage and the Thomas solve, the backbone of the 1D
//! convection–diffusion problems and their advection factors.

use super::{FactorSolve, MatError};

/// Tridiagonal matrix stored as three full-length bands.
/// `sub[0]` and `sup[n-1]` are ignored (kept zero by the constructor).
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
}

impl Tridiagonal {
    pub fn from_bands(mut sub: Vec<f64>, diag: Vec<f64>, mut sup: Vec<f64>) -> Result<Self, MatError> {
        let n = diag.len();
        if sub.len() != n || sup.len() != n {
            return Err(MatError::DimensionMismatch(format!(
                "band lengths {}/{}/{} differ",
                sub.len(),
                n,
                sup.len()
            )));
        }
        if n == 0 {
            return Err(MatError::Invalid("empty matrix".into()));
        }
        sub[0] = 0.0;
        sup[n - 1] = 0.0;
        Ok(Self { sub, diag, sup })
    }

    /// Constant-band matrix: `sub`/`diag`/`sup` repeated down the bands.
    pub fn from_constant(n: usize, sub: f64, diag: f64, sup: f64) -> Self {
        Self::from_bands(vec![sub; n], vec![diag; n], vec![sup; n]).expect("n > 0")
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn sub(&self) -> &[f64] {
        &self.sub
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn sup(&self) -> &[f64] {
        &self.sup
    }

    /// Largest absolute band entry; the scale for pivot tolerances.
    pub fn norm_max(&self) -> f64 {
        self.sub
            .iter()
            .chain(&self.diag)
            .chain(&self.sup)
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// `y = T x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(x.len(), n, "matvec dimension mismatch");
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = self.diag[i] * x[i];
            if i > 0 {
                s += self.sub[i] * x[i - 1];
            }
            if i + 1 < n {
                s += self.sup[i] * x[i + 1];
            }
            y[i] = s;
        }
        y
    }

    /// `y = Tᵀ x`.
    pub fn matvec_transpose(&self, x: &[f64]) -> Vec<f64> {
        self.transpose().matvec(x)
    }

    /// Transpose: swap the sub- and super-diagonals.
    pub fn transpose(&self) -> Tridiagonal {
        let n = self.n();
        let mut sub = vec![0.0; n];
        let mut sup = vec![0.0; n];
        for i in 0..n - 1 {
            sup[i] = self.sub[i + 1];
            sub[i + 1] = self.sup[i];
        }
        Self { sub, diag: self.diag.clone(), sup }
    }

    pub fn to_dense(&self) -> super::DenseMatrix {
        let n = self.n();
        let mut m = super::DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, self.diag[i]);
            if i > 0 {
                m.set(i, i - 1, self.sub[i]);
            }
            if i + 1 < n {
                m.set(i, i + 1, self.sup[i]);
            }
        }
        m
    }

    pub fn to_csr(&self) -> super::CsrMatrix {
        let n = self.n();
        let mut triplets = Vec::with_capacity(3 * n);
        for i in 0..n {
            if i > 0 && self.sub[i] != 0.0 {
                triplets.push((i, i - 1, self.sub[i]));
            }
            triplets.push((i, i, self.diag[i]));
            if i + 1 < n && self.sup[i] != 0.0 {
                triplets.push((i, i + 1, self.sup[i]));
            }
        }
        super::CsrMatrix::from_triplets(n, n, triplets).expect("tridiagonal pattern is valid")
    }
}

/// Solve `T x = b` by the Thomas algorithm (no pivoting).
///
/// Fails on a pivot smaller than `1e-14` relative to the band scale; the
/// 1D systems this serves are diagonally dominant or triangular.
pub fn thomas_solve(t: &Tridiagonal, b: &[f64]) -> Result<Vec<f64>, MatError> {
    let n = t.n();
    if b.len() != n {
        return Err(MatError::DimensionMismatch(format!(
            "rhs length {} for a {n}-row system",
            b.len()
        )));
    }
    let scale = t.norm_max().max(f64::MIN_POSITIVE);
    let tol = 1e-14 * scale;
    let mut c = vec![0.0; n];
    let mut x = vec![0.0; n];
    let mut d = t.diag[0];
    if d.abs() <= tol {
        return Err(MatError::PivotBreakdown { index: 0, pivot: d.abs() });
    }
    c[0] = t.sup[0] / d;
    x[0] = b[0] / d;
    for i in 1..n {
        d = t.diag[i] - t.sub[i] * c[i - 1];
        if d.abs() <= tol {
            return Err(MatError::PivotBreakdown { index: i, pivot: d.abs() });
        }
        if i + 1 < n {
            c[i] = t.sup[i] / d;
        }
        x[i] = (b[i] - t.sub[i] * x[i - 1]) / d;
    }
    for i in (0..n - 1).rev() {
        let xn = x[i + 1];
        x[i] -= c[i] * xn;
    }
    Ok(x)
}

impl FactorSolve for Tridiagonal {
    fn nrows(&self) -> usize {
        self.n()
    }

    fn solve(&self, b: &[f64]) -> Result<Vec<f64>, MatError> {
        thomas_solve(self, b)
    }

    fn solve_transpose(&self, b: &[f64]) -> Result<Vec<f64>, MatError> {
        thomas_solve(&self.transpose(), b)
    }
}
