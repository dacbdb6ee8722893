//! LSQR with an optional right factor.
//!
//! Runs Golub–Kahan bidiagonalization on `A P⁻¹` and minimises the
//! residual over the growing Krylov subspace.  Algebraically this is CG
//! on the normal equations preconditioned by `G = PᵀP`, but the
//! bidiagonalization never squares the condition number, which is the
//! point of having both solvers: agreement between them validates an
//! iteration count, divergence flags a conditioning artefact.

use super::{residual_norm, KrylovConfig, LinearOperator, RunRecorder, SolveReport, Termination};
use crate::matkit::{vecops, FactorSolve};

/// Solve `A x = b` by LSQR on `A P⁻¹`, with `x = P⁻¹ y`.
///
/// `right` supplies solves with the factor `P` and its transpose;
/// `None` runs plain LSQR.  The residual history holds `‖b − A xₖ‖₂`
/// recomputed per step, and the tolerance applies to it.
pub fn lsqr(
    a: &dyn LinearOperator,
    right: Option<&dyn FactorSolve>,
    b: &[f64],
    cfg: &KrylovConfig,
) -> SolveReport {
    assert_eq!(a.nrows(), b.len(), "matrix and right-hand side disagree");
    let n = a.ncols();
    let mut recorder = RunRecorder::new(cfg.tol);
    let x0 = cfg.start(n);

    let apply_pinv = |v: &[f64]| -> Vec<f64> {
        match right {
            Some(p) => p.solve(v).expect("factor solve failed"),
            None => v.to_vec(),
        }
    };
    let apply_pinv_t = |v: &[f64]| -> Vec<f64> {
        match right {
            Some(p) => p.solve_transpose(v).expect("transposed factor solve failed"),
            None => v.to_vec(),
        }
    };
    // One step of the preconditioned map and its transpose.
    let apply_hat = |v: &[f64]| a.apply(&apply_pinv(v));
    let apply_hat_t = |v: &[f64]| apply_pinv_t(&a.apply_transpose(v));

    let form_x = |y: &[f64], x0: &[f64]| -> Vec<f64> {
        let mut x = apply_pinv(y);
        for (xi, x0i) in x.iter_mut().zip(x0) {
            *xi += x0i;
        }
        x
    };

    let mut r0 = b.to_vec();
    if cfg.x0.is_some() {
        let ax = a.apply(&x0);
        for (ri, v) in r0.iter_mut().zip(&ax) {
            *ri -= v;
        }
    }
    let mut beta = vecops::norm2(&r0);
    if recorder.record(beta) {
        return recorder.finish(x0, true, Termination::ResidualTol);
    }
    let mut u = r0;
    vecops::scale(1.0 / beta, &mut u);

    let mut v = apply_hat_t(&u);
    let mut alpha = vecops::norm2(&v);
    if alpha == 0.0 {
        // Aᵀ r = 0 with r ≠ 0: the residual cannot be reduced further.
        return recorder.finish(
            x0,
            false,
            Termination::Breakdown("right-hand side is orthogonal to the range".into()),
        );
    }
    vecops::scale(1.0 / alpha, &mut v);

    let mut w = v.clone();
    let mut y = vec![0.0f64; n];
    let mut phibar = beta;
    let mut rhobar = alpha;

    for _step in 1..=cfg.max_iter {
        let mut u_next = apply_hat(&v);
        vecops::axpy(-alpha, &u, &mut u_next);
        beta = vecops::norm2(&u_next);
        if beta > 0.0 {
            u = u_next;
            vecops::scale(1.0 / beta, &mut u);
        }
        let mut v_next = apply_hat_t(&u);
        vecops::axpy(-beta, &v, &mut v_next);
        alpha = vecops::norm2(&v_next);
        if alpha > 0.0 {
            v = v_next;
            vecops::scale(1.0 / alpha, &mut v);
        }

        let rho = rhobar.hypot(beta);
        let c = rhobar / rho;
        let s = beta / rho;
        let theta = s * alpha;
        rhobar = -c * alpha;
        let phi = c * phibar;
        phibar = s * phibar;

        vecops::axpy(phi / rho, &w, &mut y);
        let scale_w = theta / rho;
        for (wi, vi) in w.iter_mut().zip(&v) {
            *wi = vi - scale_w * *wi;
        }

        let x = form_x(&y, &x0);
        let res = residual_norm(a, &x, b);
        if recorder.record(res) {
            return recorder.finish(x, true, Termination::ResidualTol);
        }
        if beta == 0.0 || alpha == 0.0 {
            // The bidiagonalization closed the subspace; nothing further
            // can change the iterate.
            return recorder.finish(
                x,
                false,
                Termination::Breakdown("bidiagonalization terminated early".into()),
            );
        }
    }
    let x = form_x(&y, &x0);
    recorder.finish(x, false, Termination::MaxIter)
}
