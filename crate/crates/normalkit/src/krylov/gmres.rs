//! Full GMRES with optional right preconditioning.
//!
//! Arnoldi with modified Gram–Schmidt plus a conditional second
//! orthogonalization pass, Givens rotations on the Hessenberg matrix,
//! and no restarting: the basis grows until the tolerance or the
//! iteration budget is hit.  Right preconditioning solves
//! `A M⁻¹ u = b`, `x = M⁻¹ u`, so the minimised residual lives in the
//! original system's space.

use super::{residual_norm, KrylovConfig, LinearOperator, RunRecorder, SolveReport, Termination};
use crate::matkit::vecops;

/// Threshold for the second Gram–Schmidt pass: re-orthogonalize when the
/// projection removed more than half the vector's mass.
const REORTH_RATIO: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Solve `A x = b` by full GMRES, right-preconditioned by `minv` when
/// given.  The residual history holds `‖b − A xₖ‖₂`, recomputed from the
/// assembled iterate at every step, and the tolerance applies to it.
pub fn gmres(
    a: &dyn LinearOperator,
    minv: Option<&dyn LinearOperator>,
    b: &[f64],
    cfg: &KrylovConfig,
) -> SolveReport {
    let n = b.len();
    assert_eq!(a.nrows(), n, "matrix and right-hand side disagree");
    let mut recorder = RunRecorder::new(cfg.tol);
    let x0 = cfg.start(n);

    let precondition = |v: &[f64]| -> Vec<f64> {
        match minv {
            Some(m) => m.apply(v),
            None => v.to_vec(),
        }
    };

    let mut r0 = b.to_vec();
    if cfg.x0.is_some() {
        let ax = a.apply(&x0);
        for (ri, v) in r0.iter_mut().zip(&ax) {
            *ri -= v;
        }
    }
    let beta = vecops::norm2(&r0);
    if recorder.record(beta) {
        return recorder.finish(x0, true, Termination::ResidualTol);
    }

    let mut basis: Vec<Vec<f64>> = Vec::new();
    vecops::scale(1.0 / beta, &mut r0);
    basis.push(r0);

    // Rotated Hessenberg columns (upper-triangular part) and the Givens
    // rotations that produced them.
    let mut r_cols: Vec<Vec<f64>> = Vec::new();
    let mut rotations: Vec<(f64, f64)> = Vec::new();
    let mut g = vec![beta];

    // Assemble the iterate for the current subspace dimension.
    let assemble = |k: usize, r_cols: &[Vec<f64>], g: &[f64], basis: &[Vec<f64>]| -> Vec<f64> {
        let mut y = g[..k].to_vec();
        for i in (0..k).rev() {
            for j in i + 1..k {
                y[i] -= r_cols[j][i] * y[j];
            }
            y[i] /= r_cols[i][i];
        }
        let mut u = vec![0.0f64; n];
        for (yi, v) in y.iter().zip(basis) {
            vecops::axpy(*yi, v, &mut u);
        }
        let mut x = precondition(&u);
        for (xi, x0i) in x.iter_mut().zip(&x0) {
            *xi += x0i;
        }
        x
    };

    for step in 1..=cfg.max_iter {
        let j = step - 1;
        let mut w = a.apply(&precondition(&basis[j]));
        let norm_pre = vecops::norm2(&w);
        let mut h = vec![0.0f64; j + 2];
        for (i, v) in basis.iter().enumerate() {
            let hij = vecops::dot(&w, v);
            h[i] = hij;
            vecops::axpy(-hij, v, &mut w);
        }
        if vecops::norm2(&w) < REORTH_RATIO * norm_pre {
            for (i, v) in basis.iter().enumerate() {
                let dh = vecops::dot(&w, v);
                h[i] += dh;
                vecops::axpy(-dh, v, &mut w);
            }
        }
        let h_sub = vecops::norm2(&w);
        h[j + 1] = h_sub;

        for (i, (c, s)) in rotations.iter().enumerate() {
            let (hi, hi1) = (h[i], h[i + 1]);
            h[i] = c * hi + s * hi1;
            h[i + 1] = -s * hi + c * hi1;
        }
        let rot = h[j].hypot(h[j + 1]);
        if rot == 0.0 {
            // The subspace stopped growing and the projected system is
            // singular; the iterate cannot improve.
            let x = assemble(j, &r_cols, &g, &basis);
            recorder.record(residual_norm(a, &x, b));
            return recorder.finish(
                x,
                false,
                Termination::Breakdown("projected system became singular".into()),
            );
        }
        let (c, s) = (h[j] / rot, h[j + 1] / rot);
        h[j] = rot;
        rotations.push((c, s));
        g.push(-s * g[j]);
        g[j] *= c;
        r_cols.push(h[..=j].to_vec());

        let happy = h_sub <= 1e-14 * norm_pre.max(f64::MIN_POSITIVE);
        let x = assemble(j + 1, &r_cols, &g, &basis);
        let res = residual_norm(a, &x, b);
        if recorder.record(res) {
            return recorder.finish(x, true, Termination::ResidualTol);
        }
        if happy {
            // Exact invariant subspace reached but the residual still sits
            // above the tolerance: for a nonsingular system this cannot
            // happen, so report the stall rather than loop.
            return recorder.finish(
                x,
                false,
                Termination::Breakdown("invariant subspace reached above tolerance".into()),
            );
        }
        vecops::scale(1.0 / h_sub, &mut w);
        basis.push(w);
    }
    let x = assemble(r_cols.len(), &r_cols, &g, &basis);
    recorder.finish(x, false, Termination::MaxIter)
}
