//! Polar decomposition `A = Q H` with orthogonal Q and symmetric
//! positive-definite H, computed by the Newton iteration
//! `X ← (X + X⁻ᵀ)/2`.  The iterate converges quadratically to the
//! orthogonal factor for nonsingular input.

use super::{DenseMatrix, MatError};

/// Orthogonal and symmetric factors of `A = Q H`.
#[derive(Debug, Clone)]
pub struct PolarFactor {
    pub q: DenseMatrix,
    pub h: DenseMatrix,
    /// Newton steps taken until the orthogonality defect fell below tolerance.
    pub iterations: usize,
}

const ORTHOGONALITY_TOL: f64 = 1e-13;
const MAX_NEWTON_STEPS: usize = 100;

/// Polar decomposition of a square nonsingular matrix.
pub fn polar(a: &DenseMatrix) -> Result<PolarFactor, MatError> {
    if !a.is_square() {
        return Err(MatError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    let mut x = a.clone();
    let mut defect = x.orthogonality_defect();
    let mut steps = 0usize;
    while defect > ORTHOGONALITY_TOL {
        if steps >= MAX_NEWTON_STEPS {
            return Err(MatError::NonConvergence { defect, iterations: steps });
        }
        let xinv_t = x.inverse()?.transpose();
        // Frobenius scaling equilibrates the singular values and cuts the
        // slow initial phase; near convergence the plain quadratic step
        // is already optimal, so the scale is pinned to one there.
        let mu = if defect > 1e-2 {
            (xinv_t.norm_fro() / x.norm_fro()).sqrt()
        } else {
            1.0
        };
        for (xi, yi) in x.entries_mut().iter_mut().zip(xinv_t.entries()) {
            *xi = 0.5 * (mu * *xi + *yi / mu);
        }
        steps += 1;
        defect = x.orthogonality_defect();
    }
    let q = x;
    // H = QᵀA in exact arithmetic; symmetrize to remove rounding skew.
    let qta = q.matmul_transpose_left(a);
    let mut h = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            h.set(i, j, 0.5 * (qta.get(i, j) + qta.get(j, i)));
        }
    }
    Ok(PolarFactor { q, h, iterations: steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkit::test_support::{assert_close, jacobi_eig_oracle, TestRng};

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
    fn polar_of_orthogonal_matrix_is_itself() {
        let c = std::f64::consts::FRAC_PI_6.cos();
        let s = std::f64::consts::FRAC_PI_6.sin();
        let g = DenseMatrix::from_rows(&[&[c, -s], &[s, c]]);
        let f = polar(&g).unwrap();
        assert!(f.q.sub(&g).norm_max() < 1e-13);
        assert!(f.h.sub(&DenseMatrix::identity(2)).norm_max() < 1e-12);
        assert_eq!(f.iterations, 0);
    }

    #[test]
    fn polar_reconstructs_and_q_is_orthogonal() {
        let mut rng = TestRng::new(301);
        for n in [1, 2, 5, 40, 150] {
            // Shift the diagonal so random matrices stay well conditioned.
            let mut a = random_matrix(&mut rng, n);
            for i in 0..n {
                let v = a.get(i, i);
                a.set(i, i, v + 3.0);
            }
            let f = polar(&a).unwrap();
            assert!(f.q.orthogonality_defect() < 1e-12, "n = {n}");
            let rec = f.q.matmul(&f.h);
            assert!(
                rec.sub(&a).norm_fro() <= 1e-11 * a.norm_fro(),
                "n = {n}: relative defect {}",
                rec.sub(&a).norm_fro() / a.norm_fro()
            );
        }
    }

    #[test]
    fn symmetric_factor_matches_gram_square_root() {
        // H must equal (AᵀA)^(1/2); build that root from an eigendecomposition.
        let mut rng = TestRng::new(302);
        let n = 20;
        let mut a = random_matrix(&mut rng, n);
        for i in 0..n {
            let v = a.get(i, i);
            a.set(i, i, v + 4.0);
        }
        let gram = a.transpose().matmul(&a);
        let rows: Vec<Vec<f64>> = (0..n).map(|i| gram.row(i).to_vec()).collect();
        let (vals, vecs) = jacobi_eig_oracle(&rows);
        let mut root = DenseMatrix::zeros(n, n);
        for k in 0..n {
            let s = vals[k].sqrt();
            for i in 0..n {
                for j in 0..n {
                    let v = root.get(i, j) + s * vecs[k][i] * vecs[k][j];
                    root.set(i, j, v);
                }
            }
        }
        let f = polar(&a).unwrap();
        for i in 0..n {
            for j in 0..n {
                assert_close(f.h.get(i, j), root.get(i, j), 1e-10);
            }
        }
    }

    #[test]
    fn scaling_keeps_badly_scaled_input_cheap() {
        let mut rng = TestRng::new(303);
        let n = 30;
        let mut a = random_matrix(&mut rng, n);
        for i in 0..n {
            let v = a.get(i, i);
            a.set(i, i, v + 3.0);
        }
        let f = polar(&a.scaled(1e8)).unwrap();
        assert!(f.iterations <= 12, "took {} steps", f.iterations);
        assert!(f.q.orthogonality_defect() < 1e-12);
    }

    #[test]
    fn singular_input_reports_failure() {
        let a = DenseMatrix::from_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(polar(&a).is_err());
    }
}
