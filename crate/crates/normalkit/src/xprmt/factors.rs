use std::collections::BTreeMap;

use super::table::{Cell, Metadata, TableResult, TableRow};
use crate::fd1d::{assemble_centered, Problem1d};
use crate::krylov::{cgne, KrylovConfig, LinearOperator};
use crate::matkit::{polar, qr, rq, CholeskyFactor, DenseTriangular, MatError, Tridiagonal, UpLo};
use crate::precond::PreconditionerHandle;

pub const FACTOR_SWEEP_SIZES: &[usize] = &[10, 100, 1000];
pub const FACTOR_SWEEP_TOL: f64 = 1e-10;
pub const FACTOR_SWEEP_CAP: usize = 1000;

/// Centered-difference convection-diffusion system with every row scaled
/// by `h²`.
///
/// The scaling keeps matrix entries and the right-hand side O(1) at every
/// size, so a fixed absolute residual tolerance is equally demanding for
/// all rows of the sweep.
pub fn scaled_centered_system(n: usize) -> (Tridiagonal, Vec<f64>) {
    let problem = Problem1d::boundary_layer(n, 1.0);
    let (a, rhs) = assemble_centered(&problem, &|_| 0.0);
    let h2 = problem.h() * problem.h();
    let scale = |v: &[f64]| v.iter().map(|x| x * h2).collect::<Vec<f64>>();
    let scaled = Tridiagonal::from_bands(scale(a.sub()), scale(a.diag()), scale(a.sup()))
        .expect("scaling preserves the band shape");
    (scaled, scale(&rhs))
}

/// Compares four exact-factor normal-equation preconditioners on the
/// scaled centered system, one row per problem size.
///
/// The columns are `G = FᵀF` for `F` equal to the triangular factor of a
/// QR decomposition, the triangular factor of an RQ decomposition, and
/// the symmetric polar factor of `A`, plus `G = AAᵀ` assembled explicitly
/// and Cholesky factored, which is the square of the polar factor of
/// `Aᵀ`.  The first and third give `G = AᵀA` exactly, so the solver stops
/// after a single step up to round-off.  The other two do not: the Gram
/// square of the transposed factor costs a few extra steps, and the RQ
/// variant degrades with size.
pub fn run_factor_sweep(sizes: &[usize]) -> Result<TableResult, MatError> {
    let cfg = KrylovConfig::new(FACTOR_SWEEP_TOL, FACTOR_SWEEP_CAP);
    let mut rows = Vec::new();
    for &n in sizes {
        let (a, rhs) = scaled_centered_system(n);
        let dense = a.to_dense();
        let a_csr = a.to_csr();
        let gram_t = a_csr.matmul(&a_csr.transpose())?;
        let handles = [
            PreconditionerHandle::from_factor(
                "qr-r",
                Box::new(DenseTriangular::new(qr(&dense)?.r, UpLo::Upper)?),
            ),
            PreconditionerHandle::from_factor(
                "rq-r",
                Box::new(DenseTriangular::new(rq(&dense)?.r, UpLo::Upper)?),
            ),
            PreconditionerHandle::from_factor(
                "polar-left",
                Box::new(CholeskyFactor::from_dense(&polar(&dense)?.h)?),
            ),
            PreconditionerHandle::cholesky_csr("polar-right", &gram_t)?,
        ];
        let cells = handles
            .iter()
            .map(|g| Cell::from_report(&cgne(&a, None, Some(g as &dyn LinearOperator), &rhs, &cfg)))
            .collect();
        rows.push(TableRow { param: n.to_string(), cells });
    }
    Ok(TableResult {
        experiment: "factor-sweep".to_string(),
        row_label: "n".to_string(),
        col_labels: ["qr-r", "rq-r", "polar-left", "polar-right"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        rows,
        metadata: Metadata {
            solver: "cgne".to_string(),
            riesz: "identity".to_string(),
            preconditioner: "exact factor of the system matrix".to_string(),
            tol_abs: FACTOR_SWEEP_TOL,
            max_iter: FACTOR_SWEEP_CAP,
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: BTreeMap::from([
                ("nu".to_string(), "1".to_string()),
                ("beta".to_string(), "1".to_string()),
                ("boundary".to_string(), "u(0)=0, u(1)=1".to_string()),
                ("forcing".to_string(), "0".to_string()),
                ("scheme".to_string(), "centered, rows scaled by h^2".to_string()),
            ]),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_rows_keep_entries_near_unity() {
        let (a, rhs) = scaled_centered_system(1000);
        for i in 0..a.n() {
            assert!((a.diag()[i] - 2.0).abs() < 1e-12);
        }
        let tail = rhs[rhs.len() - 1];
        assert!(tail > 0.9 && tail < 1.1);
        assert!(rhs[..rhs.len() - 1].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn orthogonal_factors_converge_in_one_step_and_rq_lags() {
        let table = run_factor_sweep(&[10]).unwrap();
        let cells = &table.rows[0].cells;
        assert!(cells.iter().all(|c| c.converged));
        assert!(cells[0].iterations <= 2);
        assert!(cells[2].iterations <= 2);
        assert!((cells[1].iterations as i64 - 12).abs() <= 1);
        assert!((cells[3].iterations as i64 - 3).abs() <= 1);
    }
}
