//! Preconditioned conjugate gradients.

use super::{KrylovConfig, LinearOperator, RunRecorder, SolveReport, Termination};
use crate::matkit::vecops;

/// CG on a symmetric positive-definite system `B x = f`, preconditioned
/// by an SPD `ginv ≈ B⁻¹` apply.
///
/// The residual recorded and tested against the tolerance is the
/// recurrence residual `‖f − B xₖ‖₂`; callers that solve a transformed
/// system and want to stop on the residual of the *original* one use
/// [`pcg_monitored`].
///
/// Search directions use the classical (Fletcher-Reeves) form of `β`
/// unless [`KrylovConfig::flexible`] asks for the Polak-Ribière form,
/// truncated at zero.  For a fixed linear preconditioner consecutive
/// residuals are `G⁻¹`-orthogonal and the two coincide in exact
/// arithmetic; when the preconditioner is an inner iteration whose
/// output varies between applications, only the flexible form keeps
/// the outer iteration from stagnating.
pub fn pcg(
    b_op: &dyn LinearOperator,
    ginv: Option<&dyn LinearOperator>,
    f: &[f64],
    cfg: &KrylovConfig,
) -> SolveReport {
    pcg_monitored(b_op, ginv, f, cfg, |_, _, recurrence| recurrence)
}

/// CG with a caller-supplied residual monitor.
///
/// After every update the monitor receives `(step, xₖ, recurrence ‖r‖₂)`
/// and returns the residual value to record; iteration stops when that
/// value reaches the tolerance.  Normal-equation solvers use the hook to
/// recompute the residual of the original system at every step.
pub fn pcg_monitored<M>(
    b_op: &dyn LinearOperator,
    ginv: Option<&dyn LinearOperator>,
    f: &[f64],
    cfg: &KrylovConfig,
    mut monitor: M,
) -> SolveReport
where
    M: FnMut(usize, &[f64], f64) -> f64,
{
    let n = f.len();
    assert_eq!(b_op.nrows(), n, "operator and right-hand side disagree");
    let mut recorder = RunRecorder::new(cfg.tol);
    let mut x = cfg.start(n);

    let mut r = f.to_vec();
    if cfg.x0.is_some() {
        let bx = b_op.apply(&x);
        for (ri, v) in r.iter_mut().zip(&bx) {
            *ri -= v;
        }
    }
    let res0 = monitor(0, &x, vecops::norm2(&r));
    if recorder.record(res0) {
        return recorder.finish(x, true, Termination::ResidualTol);
    }

    let mut z = match ginv {
        Some(g) => g.apply(&r),
        None => r.clone(),
    };
    let mut p = z.clone();
    let mut rz = vecops::dot(&r, &z);
    if !rz.is_finite() || rz <= 0.0 {
        return recorder.finish(
            x,
            false,
            Termination::Breakdown(format!("preconditioner lost definiteness: <r, G⁻¹r> = {rz:e}")),
        );
    }

    let mut r_prev = if cfg.flexible { vec![0.0; n] } else { Vec::new() };
    for step in 1..=cfg.max_iter {
        let q = b_op.apply(&p);
        let ptq = vecops::dot(&p, &q);
        if !ptq.is_finite() || ptq <= 0.0 {
            return recorder.finish(
                x,
                false,
                Termination::Breakdown(format!("operator lost definiteness: <p, Bp> = {ptq:e}")),
            );
        }
        let alpha = rz / ptq;
        vecops::axpy(alpha, &p, &mut x);
        if cfg.flexible {
            r_prev.copy_from_slice(&r);
        }
        for (ri, qi) in r.iter_mut().zip(&q) {
            *ri -= alpha * qi;
        }
        let res = monitor(step, &x, vecops::norm2(&r));
        if recorder.record(res) {
            return recorder.finish(x, true, Termination::ResidualTol);
        }
        z = match ginv {
            Some(g) => g.apply(&r),
            None => r.clone(),
        };
        let rz_next = vecops::dot(&r, &z);
        if !rz_next.is_finite() || rz_next <= 0.0 {
            return recorder.finish(
                x,
                false,
                Termination::Breakdown(format!(
                    "preconditioner lost definiteness: <r, G⁻¹r> = {rz_next:e}"
                )),
            );
        }
        let beta = if cfg.flexible {
            ((rz_next - vecops::dot(&z, &r_prev)) / rz).max(0.0)
        } else {
            rz_next / rz
        };
        rz = rz_next;
        for (pi, zi) in p.iter_mut().zip(&z) {
            *pi = zi + beta * *pi;
        }
    }
    recorder.finish(x, false, Termination::MaxIter)
}
