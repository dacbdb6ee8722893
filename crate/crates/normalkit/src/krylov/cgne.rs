//! CG on the weighted normal equations.
//!
//! A nonsymmetric system `A x = b` is symmetrised as
//! `Aᵀ T A x = Aᵀ T b` with an SPD weight `T` (identity when absent) and
//! handed to preconditioned CG.  Each step applies `A`, `T`, `Aᵀ`, the
//! preconditioner inverse, and one extra `A x` to recompute the residual
//! of the original system, which is what the iteration stops on.

use super::{pcg_monitored, residual_norm, KrylovConfig, LinearOperator, SolveReport};

/// The symmetric operator `x ↦ Aᵀ T A x` applied matrix-free, the
/// coefficient matrix the weighted normal equations are solved with.
/// Also useful on its own for spectrum probes and energy norms.
pub struct NormalEquationOperator<'a> {
    a: &'a dyn LinearOperator,
    t: Option<&'a dyn LinearOperator>,
}

impl<'a> NormalEquationOperator<'a> {
    pub fn new(a: &'a dyn LinearOperator, t: Option<&'a dyn LinearOperator>) -> Self {
        if let Some(t) = t {
            assert_eq!(t.nrows(), a.nrows(), "weight and matrix disagree");
        }
        Self { a, t }
    }

    /// The weighted right-hand side `Aᵀ T b`.
    pub fn weighted_rhs(&self, b: &[f64]) -> Vec<f64> {
        let tb = match self.t {
            Some(op) => op.apply(b),
            None => b.to_vec(),
        };
        self.a.apply_transpose(&tb)
    }
}

impl LinearOperator for NormalEquationOperator<'_> {
    fn nrows(&self) -> usize {
        self.a.ncols()
    }
    fn ncols(&self) -> usize {
        self.a.ncols()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let ax = self.a.apply(x);
        let weighted = match self.t {
            Some(t) => t.apply(&ax),
            None => ax,
        };
        self.a.apply_transpose(&weighted)
    }
    fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        self.apply(x)
    }
}

/// Solve `A x = b` by CG on `Aᵀ T A x = Aᵀ T b`.
///
/// * `t`: SPD residual weight (a Riesz map); identity when `None`.
/// * `ginv`: SPD preconditioner inverse apply, `G⁻¹ ≈ (Aᵀ T A)⁻¹`;
///   unpreconditioned when `None`.
///
/// The report's residual history holds `‖b − A xₖ‖₂` per step, and the
/// tolerance applies to that value.
pub fn cgne(
    a: &dyn LinearOperator,
    t: Option<&dyn LinearOperator>,
    ginv: Option<&dyn LinearOperator>,
    b: &[f64],
    cfg: &KrylovConfig,
) -> SolveReport {
    assert_eq!(a.nrows(), b.len(), "matrix and right-hand side disagree");
    let normal = NormalEquationOperator::new(a, t);
    let f = normal.weighted_rhs(b);
    pcg_monitored(&normal, ginv, &f, cfg, |_, x, _| residual_norm(a, x, b))
}
