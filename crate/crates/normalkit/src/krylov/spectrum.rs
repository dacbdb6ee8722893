//! Weighted singular value diagnostics.
//!
//! The convergence of CG on `Aᵀ T A x = Aᵀ T b` preconditioned by
//! `G = Pᵀ T P` is governed by the singular values of `W = A P⁻¹`
//! measured in the T-inner product: their squares are the eigenvalues
//! of the weighted Gram matrix `T⁻¹ Wᵀ T W`, which is similar to
//! `G⁻¹ (Aᵀ T A)`.  A factor that clusters them near one wins before
//! the iteration even starts, and the classical CG bound turns the
//! extreme ratio into an iteration budget.

use super::{pcg_monitored, KrylovConfig, LinearOperator};
use crate::matkit::{
    cholesky_dense, sym_eig, vecops, DenseMatrix, DenseTriangular, FactorSolve, MatError, UpLo,
};

/// T-weighted singular values of a right-preconditioned matrix,
/// ascending.
#[derive(Debug, Clone)]
pub struct TSingularSpectrum {
    pub sigma: Vec<f64>,
}

impl TSingularSpectrum {
    pub fn min(&self) -> f64 {
        *self.sigma.first().expect("spectrum is nonempty")
    }

    pub fn max(&self) -> f64 {
        *self.sigma.last().expect("spectrum is nonempty")
    }

    /// Extreme singular value ratio `σ_max / σ_min`.  The condition
    /// number of the preconditioned normal matrix is this squared.
    pub fn kappa(&self) -> f64 {
        self.max() / self.min()
    }

    /// Smallest `k` with `2 ((κ−1)/(κ+1))^k ≤ eps`, the classical CG
    /// energy-error bound with `κ` the singular value ratio.  `None`
    /// when the ratio gives no decrease (singular or empty spectrum).
    pub fn cg_iteration_bound(&self, eps: f64) -> Option<usize> {
        cg_iteration_bound(self.kappa(), eps)
    }
}

/// Iteration count guaranteed by the CG energy-error bound for a given
/// extreme singular value ratio.
pub fn cg_iteration_bound(kappa: f64, eps: f64) -> Option<usize> {
    if !(kappa >= 1.0) || !(eps > 0.0) {
        return None;
    }
    let rho = (kappa - 1.0) / (kappa + 1.0);
    if rho == 0.0 {
        return Some(1);
    }
    if !(rho < 1.0) {
        return None;
    }
    let mut k = ((2.0 / eps).ln() / (1.0 / rho).ln()).ceil() as usize;
    k = k.max(1);
    // Guard the rounding at the boundary.
    while 2.0 * rho.powi(k as i32) > eps {
        k += 1;
    }
    Some(k)
}

/// Energy error `‖xₖ − x*‖_B` of a CG run on the SPD system `B x = f`
/// preconditioned by `ginv`, one entry per step starting at the initial
/// guess.  Measuring against a known solution exposes the quantity the
/// classical bound actually controls, which the residual only tracks up
/// to a condition-dependent factor.
pub fn cg_energy_history(
    b_op: &dyn LinearOperator,
    ginv: Option<&dyn LinearOperator>,
    f: &[f64],
    x_star: &[f64],
    cfg: &KrylovConfig,
) -> Vec<f64> {
    let mut history = Vec::new();
    pcg_monitored(b_op, ginv, f, cfg, |_, x, recurrence| {
        let e: Vec<f64> = x.iter().zip(x_star).map(|(xi, si)| xi - si).collect();
        let be = b_op.apply(&e);
        history.push(vecops::dot(&e, &be).max(0.0).sqrt());
        recurrence
    });
    history
}

/// `W = A P⁻¹`, built one solve per column.
pub fn right_preconditioned_matrix(
    a: &DenseMatrix,
    p: &dyn FactorSolve,
) -> Result<DenseMatrix, MatError> {
    let n = a.cols();
    if p.nrows() != n {
        return Err(MatError::DimensionMismatch(format!(
            "factor has {} rows, matrix has {} columns",
            p.nrows(),
            n
        )));
    }
    let mut w = DenseMatrix::zeros(a.rows(), n);
    let mut e = vec![0.0f64; n];
    for j in 0..n {
        e[j] = 1.0;
        let col = a.matvec(&p.solve(&e)?);
        e[j] = 0.0;
        for (i, v) in col.iter().enumerate() {
            w.set(i, j, *v);
        }
    }
    Ok(w)
}

/// T-weighted singular values of `W`, ascending.
///
/// These are the singular values of `W` measured in the inner product
/// induced by the symmetric positive definite weight `T`: the square
/// roots of the eigenvalues of `T⁻¹ Wᵀ T W`.  Writing `T = L Lᵀ` they
/// equal the plain singular values of `Lᵀ W L⁻ᵀ`, which is how they
/// are computed here; the weighted case therefore requires `W` to be
/// square.  With `W = A P⁻¹` the squares coincide with the
/// eigenvalues of `(Pᵀ T P)⁻¹ (Aᵀ T A)`, the operator that CG on the
/// weighted normal equations actually sees.  Without a weight this
/// reduces to the ordinary singular values.
pub fn t_singular_values(
    w: &DenseMatrix,
    t: Option<&DenseMatrix>,
) -> Result<TSingularSpectrum, MatError> {
    let gram = match t {
        Some(t) => {
            if !w.is_square() {
                return Err(MatError::NotSquare {
                    rows: w.rows(),
                    cols: w.cols(),
                });
            }
            let l = cholesky_dense(t)?;
            let lw = l.matmul_transpose_left(w);
            let tri = DenseTriangular::new(l, UpLo::Lower)?;
            let n = w.rows();
            let mut vt = DenseMatrix::zeros(n, n);
            for i in 0..n {
                let col = tri.solve(lw.row(i))?;
                for (k, v) in col.iter().enumerate() {
                    vt.set(k, i, *v);
                }
            }
            vt.matmul_transpose_left(&vt)
        }
        None => w.matmul_transpose_left(w),
    };
    let eigenvalues = sym_eig(&gram)?;
    let sigma = eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect();
    Ok(TSingularSpectrum { sigma })
}
