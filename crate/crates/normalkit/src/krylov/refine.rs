//! Iterative refinement: Richardson iteration with a factor solve.

use super::{residual_norm, KrylovConfig, LinearOperator, RunRecorder, SolveReport, Termination};
use crate::matkit::FactorSolve;

/// Repeatedly correct `x ← x + P⁻¹(b − A x)`.
///
/// Converges when the spectral radius of `I − A P⁻¹` is below one, which
/// holds for any factor `P` close enough to `A`.  One step with `P = A`
/// recovers the direct solve; the iteration count for an approximate
/// factor measures how much of `A` the factor captured.
pub fn iterative_refinement(
    a: &dyn LinearOperator,
    p: &dyn FactorSolve,
    b: &[f64],
    cfg: &KrylovConfig,
) -> SolveReport {
    let n = b.len();
    assert_eq!(a.nrows(), n, "matrix and right-hand side disagree");
    let mut recorder = RunRecorder::new(cfg.tol);
    let mut x = cfg.start(n);

    let mut res = residual_norm(a, &x, b);
    if recorder.record(res) {
        return recorder.finish(x, true, Termination::ResidualTol);
    }
    let res0 = res;
    let mut previous = res;
    for _step in 1..=cfg.max_iter {
        let ax = a.apply(&x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, axi)| bi - axi).collect();
        let d = match p.solve(&r) {
            Ok(d) => d,
            Err(e) => {
                recorder.record(previous);
                return recorder.finish(x, false, Termination::Breakdown(e.to_string()));
            }
        };
        for (xi, di) in x.iter_mut().zip(&d) {
            *xi += di;
        }
        res = residual_norm(a, &x, b);
        if recorder.record(res) {
            return recorder.finish(x, true, Termination::ResidualTol);
        }
        if !res.is_finite() || res > 100.0 * previous || res > 1e6 * res0 {
            return recorder.finish(
                x,
                false,
                Termination::Breakdown(format!("refinement diverged: residual {res:e}")),
            );
        }
        previous = res;
    }
    recorder.finish(x, false, Termination::MaxIter)
}
