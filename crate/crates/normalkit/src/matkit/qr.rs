//! QR and RQ factorizations.
//!
//! Dense QR uses Householder reflections; the tridiagonal entry point
//! uses Givens rotations and keeps R in banded storage (bandwidth ≤ 2),
//! so building and solving with it stays O(n).  RQ is computed from the
//! QR factorization of the transposed, column-reversed matrix.  All
//! factors follow the convention diag(R) ≥ 0, which makes the
//! factorizations unique for nonsingular input.

use super::{vecops, DenseMatrix, FactorSolve, MatError, Tridiagonal};

/// Dense QR: `A = Q R` with orthogonal Q and upper-triangular R.
#[derive(Debug, Clone)]
pub struct QrFactor {
    pub q: DenseMatrix,
    pub r: DenseMatrix,
}

/// Dense RQ: `A = R Q` with upper-triangular R and orthogonal Q.
#[derive(Debug, Clone)]
pub struct RqFactor {
    pub r: DenseMatrix,
    pub q: DenseMatrix,
}

/// Householder QR of a square matrix.
pub fn qr(a: &DenseMatrix) -> Result<QrFactor, MatError> {
    if !a.is_square() {
        return Err(MatError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    let mut r = a.clone();
    let mut q = DenseMatrix::identity(n);
    let mut v = vec![0.0f64; n];
    for k in 0..n.saturating_sub(1) {
        let mut norm2 = 0.0;
        for i in k..n {
            let x = r.get(i, k);
            v[i] = x;
            norm2 += x * x;
        }
        let norm = norm2.sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if v[k] >= 0.0 { -norm } else { norm };
        v[k] -= alpha;
        let vtv = norm2 - 2.0 * alpha * r.get(k, k) + alpha * alpha;
        if vtv <= 0.0 {
            continue;
        }
        let beta = 2.0 / vtv;
        // R <- H R restricted to columns k..
        for j in k..n {
            let mut s = 0.0;
            for i in k..n {
                s += v[i] * r.get(i, j);
            }
            s *= beta;
            for i in k..n {
                let val = r.get(i, j) - s * v[i];
                r.set(i, j, val);
            }
        }
        // Q <- Q H, one contiguous row of Q at a time.
        for i in 0..n {
            let row = q.row_mut(i);
            let s = beta * vecops::dot(&row[k..], &v[k..]);
            for (slot, vv) in row[k..].iter_mut().zip(&v[k..]) {
                *slot -= s * vv;
            }
        }
        for i in k + 1..n {
            r.set(i, k, 0.0);
        }
    }
    fix_qr_signs(&mut q, &mut r);
    Ok(QrFactor { q, r })
}

fn fix_qr_signs(q: &mut DenseMatrix, r: &mut DenseMatrix) {
    let n = r.rows();
    for i in 0..n {
        if r.get(i, i) < 0.0 {
            for j in i..n {
                let v = r.get(i, j);
                r.set(i, j, -v);
            }
            for k in 0..n {
                let v = q.get(k, i);
                q.set(k, i, -v);
            }
        }
    }
}

/// RQ factorization via QR of the transposed, column-reversed matrix:
/// with J the reversal, `Aᵀ J = Q₁ R₁` gives `A = (J R₁ᵀ J)(J Q₁ᵀ)`.
pub fn rq(a: &DenseMatrix) -> Result<RqFactor, MatError> {
    if !a.is_square() {
        return Err(MatError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    let mut b = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            // B = Aᵀ J, i.e. B[i][j] = A[n-1-j][i].
            b.set(i, j, a.get(n - 1 - j, i));
        }
    }
    let f = qr(&b)?;
    let mut r = DenseMatrix::zeros(n, n);
    let mut q = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            r.set(i, j, f.r.get(n - 1 - j, n - 1 - i));
            q.set(i, j, f.q.get(j, n - 1 - i));
        }
    }
    // Re-establish diag(R) >= 0: negate matching columns of R / rows of Q.
    for k in 0..n {
        if r.get(k, k) < 0.0 {
            for i in 0..=k {
                let v = r.get(i, k);
                r.set(i, k, -v);
            }
            for j in 0..n {
                let v = q.get(k, j);
                q.set(k, j, -v);
            }
        }
    }
    Ok(RqFactor { r, q })
}

/// R factor of a tridiagonal matrix, banded: diagonal plus two
/// superdiagonals, eliminated by Givens rotations in a single sweep.
#[derive(Debug, Clone)]
pub struct TridiagonalQr {
    d0: Vec<f64>,
    d1: Vec<f64>,
    d2: Vec<f64>,
}

/// Givens QR of a tridiagonal matrix; returns the banded R factor.
///
/// Fails with the offending index when a diagonal of R falls below
/// `1e-14` relative to the band scale (rank deficiency).
pub fn qr_tridiagonal(t: &Tridiagonal) -> Result<TridiagonalQr, MatError> {
    let n = t.n();
    let mut d0 = t.diag().to_vec();
    let mut d1 = t.sup().to_vec();
    let mut d2 = vec![0.0f64; n];
    let sub = t.sub();
    for i in 0..n - 1 {
        let x = d0[i];
        let y = sub[i + 1];
        if y == 0.0 {
            if x < 0.0 {
                // No rotation fires here, so keep the sign convention by
                // negating the (already final) row of R.
                d0[i] = -d0[i];
                d1[i] = -d1[i];
                d2[i] = -d2[i];
            }
            continue;
        }
        let r = x.hypot(y);
        let (c, s) = (x / r, y / r);
        d0[i] = r;
        let (t01, t02) = (d1[i], d2[i]);
        let (u0, u1) = (d0[i + 1], d1[i + 1]);
        d1[i] = c * t01 + s * u0;
        d2[i] = c * t02 + s * u1;
        d0[i + 1] = -s * t01 + c * u0;
        d1[i + 1] = -s * t02 + c * u1;
    }
    if d0[n - 1] < 0.0 {
        d0[n - 1] = -d0[n - 1];
        // Only the diagonal remains in the last row, so the sign flip ends here.
    }
    let scale = t.norm_max().max(f64::MIN_POSITIVE);
    for (i, d) in d0.iter().enumerate() {
        if d.abs() <= 1e-14 * scale {
            return Err(MatError::RankDeficient { index: i, value: d.abs() });
        }
    }
    Ok(TridiagonalQr { d0, d1, d2 })
}

impl TridiagonalQr {
    pub fn n(&self) -> usize {
        self.d0.len()
    }

    /// Bands (diagonal, first and second superdiagonal).
    pub fn bands(&self) -> (&[f64], &[f64], &[f64]) {
        (&self.d0, &self.d1, &self.d2)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.n();
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, self.d0[i]);
            if i + 1 < n {
                m.set(i, i + 1, self.d1[i]);
            }
            if i + 2 < n {
                m.set(i, i + 2, self.d2[i]);
            }
        }
        m
    }
}

impl FactorSolve for TridiagonalQr {
    fn nrows(&self) -> usize {
        self.n()
    }

    /// Back-substitution with bandwidth 2: solve `R x = b`.
    fn solve(&self, b: &[f64]) -> Result<Vec<f64>, MatError> {
        let n = self.n();
        if b.len() != n {
            return Err(MatError::DimensionMismatch(format!(
                "rhs length {} for a {n}-row factor",
                b.len()
            )));
        }
        let mut x = b.to_vec();
        for i in (0..n).rev() {
            let mut s = x[i];
            if i + 1 < n {
                s -= self.d1[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= self.d2[i] * x[i + 2];
            }
            x[i] = s / self.d0[i];
        }
        Ok(x)
    }

    /// Forward substitution: solve `Rᵀ x = b`.
    fn solve_transpose(&self, b: &[f64]) -> Result<Vec<f64>, MatError> {
        let n = self.n();
        if b.len() != n {
            return Err(MatError::DimensionMismatch(format!(
                "rhs length {} for a {n}-row factor",
                b.len()
            )));
        }
        let mut x = b.to_vec();
        for i in 0..n {
            let mut s = x[i];
            if i >= 1 {
                s -= self.d1[i - 1] * x[i - 1];
            }
            if i >= 2 {
                s -= self.d2[i - 2] * x[i - 2];
            }
            x[i] = s / self.d0[i];
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkit::test_support::{assert_close, TestRng};

    fn random_matrix(rng: &mut TestRng, n: usize) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, rng.uniform());
            }
        }
        m
    }

    #[test]
    fn qr_reconstructs_with_orthogonal_q() {
        let mut rng = TestRng::new(201);
        for n in [1, 2, 3, 10, 60] {
            let a = random_matrix(&mut rng, n);
            let f = qr(&a).unwrap();
            let rec = f.q.matmul(&f.r);
            assert!(rec.sub(&a).norm_fro() <= 1e-12 * (1.0 + a.norm_fro()), "n = {n}");
            assert!(f.q.orthogonality_defect() < 1e-13, "n = {n}");
            for i in 0..n {
                assert!(f.r.get(i, i) >= 0.0, "sign convention broken at {i}");
                for j in 0..i {
                    assert_eq!(f.r.get(i, j), 0.0);
                }
            }
        }
    }

    #[test]
    fn qr_of_upper_triangular_is_identity_q() {
        let a = DenseMatrix::from_rows(&[&[2.0, 1.0, 3.0], &[0.0, 1.5, -1.0], &[0.0, 0.0, 4.0]]);
        let f = qr(&a).unwrap();
        assert!(f.q.sub(&DenseMatrix::identity(3)).norm_max() < 1e-14);
        assert!(f.r.sub(&a).norm_max() < 1e-14);
    }

    #[test]
    fn rq_reconstructs_with_orthogonal_q() {
        let mut rng = TestRng::new(202);
        for n in [1, 2, 3, 10, 60] {
            let a = random_matrix(&mut rng, n);
            let f = rq(&a).unwrap();
            let rec = f.r.matmul(&f.q);
            assert!(rec.sub(&a).norm_fro() <= 1e-12 * (1.0 + a.norm_fro()), "n = {n}");
            assert!(f.q.orthogonality_defect() < 1e-13, "n = {n}");
            for i in 0..n {
                assert!(f.r.get(i, i) >= 0.0, "sign convention broken at {i}");
                for j in 0..i {
                    assert_close(f.r.get(i, j), 0.0, 1e-14);
                }
            }
        }
    }

    #[test]
    fn rq_differs_from_qr_for_nonnormal_input() {
        let mut rng = TestRng::new(203);
        let a = random_matrix(&mut rng, 8);
        let f1 = qr(&a).unwrap();
        let f2 = rq(&a).unwrap();
        assert!(f1.r.sub(&f2.r).norm_max() > 1e-6);
    }

    #[test]
    fn tridiagonal_qr_matches_dense_r() {
        let mut rng = TestRng::new(204);
        let n = 40;
        let t = Tridiagonal::from_bands(
            (0..n).map(|_| rng.uniform()).collect(),
            (0..n).map(|_| 2.0 + rng.uniform()).collect(),
            (0..n).map(|_| rng.uniform()).collect(),
        )
        .unwrap();
        let banded = qr_tridiagonal(&t).unwrap();
        let dense = qr(&t.to_dense()).unwrap();
        assert!(banded.to_dense().sub(&dense.r).norm_max() < 1e-12);
    }

    #[test]
    fn tridiagonal_qr_solves_both_directions() {
        let mut rng = TestRng::new(205);
        let n = 50;
        let t = Tridiagonal::from_bands(
            (0..n).map(|_| rng.uniform()).collect(),
            (0..n).map(|_| 3.0 + rng.uniform()).collect(),
            (0..n).map(|_| rng.uniform()).collect(),
        )
        .unwrap();
        let f = qr_tridiagonal(&t).unwrap();
        let r = f.to_dense();
        let x_true: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
        let x = f.solve(&r.matvec(&x_true)).unwrap();
        for (xi, ti) in x.iter().zip(&x_true) {
            assert_close(*xi, *ti, 1e-11);
        }
        let xt = f.solve_transpose(&r.matvec_transpose(&x_true)).unwrap();
        for (xi, ti) in xt.iter().zip(&x_true) {
            assert_close(*xi, *ti, 1e-11);
        }
    }

    #[test]
    fn tridiagonal_qr_flags_rank_deficiency() {
        // Rank-deficient: last column is zero after elimination.
        let t = Tridiagonal::from_bands(
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0],
        )
        .unwrap();
        assert!(matches!(
            qr_tridiagonal(&t),
            Err(MatError::RankDeficient { .. })
        ));
    }

    #[test]
    fn gram_matrices_of_r_and_p_agree() {
        // RᵀR must reproduce PᵀP when P = QR: the Gram matrix only sees R.
        let mut rng = TestRng::new(206);
        let n = 30;
        let p = Tridiagonal::from_bands(
            (0..n).map(|_| rng.uniform()).collect(),
            (0..n).map(|_| 2.5 + rng.uniform()).collect(),
            (0..n).map(|_| rng.uniform()).collect(),
        )
        .unwrap();
        let r = qr_tridiagonal(&p).unwrap().to_dense();
        let pd = p.to_dense();
        let ptp = pd.transpose().matmul(&pd);
        let rtr = r.transpose().matmul(&r);
        assert!(ptp.sub(&rtr).norm_max() <= 1e-10 * (1.0 + ptp.norm_max()));
    }
}
