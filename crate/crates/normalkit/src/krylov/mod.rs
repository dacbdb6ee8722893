//! Iterative solvers and convergence diagnostics.
//!
//! Every solver here reports the true residual `‖b − A xₖ‖₂`, recomputed
//! from the original system at every step rather than carried through a
//! recurrence.  That costs one extra matrix apply per iteration and
//! buys honest iteration counts: a preconditioned normal-equation solve
//! stops when the *original* system backs it up, not when an internal
//! quantity happens to be small.

mod cgne;
mod gmres;
mod lsqr;
mod pcg;
mod refine;
mod spectrum;

pub use cgne::{cgne, NormalEquationOperator};
pub use gmres::gmres;
pub use lsqr::lsqr;
pub use pcg::{pcg, pcg_monitored};
pub use refine::iterative_refinement;
pub use spectrum::{
    cg_energy_history, right_preconditioned_matrix, t_singular_values, TSingularSpectrum,
};

use std::io::Write;
use std::time::Duration;

use crate::matkit::{CsrMatrix, DenseMatrix, FactorSolve, Tridiagonal};

/// A real linear map with an available transpose apply.
///
/// Normal-equation solvers need `Aᵀ` as much as `A`, so the transpose
/// apply is part of the contract.  Symmetric operators implement it by
/// delegation.
pub trait LinearOperator {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    /// `y = A x`.
    fn apply(&self, x: &[f64]) -> Vec<f64>;
    /// `y = Aᵀ x`.
    fn apply_transpose(&self, x: &[f64]) -> Vec<f64>;
}

impl LinearOperator for DenseMatrix {
    fn nrows(&self) -> usize {
        self.rows()
    }
    fn ncols(&self) -> usize {
        self.cols()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.matvec(x)
    }
    fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        self.matvec_transpose(x)
    }
}

impl LinearOperator for CsrMatrix {
    fn nrows(&self) -> usize {
        self.rows()
    }
    fn ncols(&self) -> usize {
        self.cols()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.matvec(x)
    }
    fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        self.matvec_transpose(x)
    }
}

impl LinearOperator for Tridiagonal {
    fn nrows(&self) -> usize {
        self.n()
    }
    fn ncols(&self) -> usize {
        self.n()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.matvec(x)
    }
    fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        self.matvec_transpose(x)
    }
}

/// A factored matrix used as the operator `P⁻¹`.
///
/// Factor solves only fail on shape mismatch once the factorization has
/// been constructed, so a failure here is a caller bug and panics.
pub struct FactorSolveOp<'a>(pub &'a dyn FactorSolve);

impl LinearOperator for FactorSolveOp<'_> {
    fn nrows(&self) -> usize {
        self.0.nrows()
    }
    fn ncols(&self) -> usize {
        self.0.nrows()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.0.solve(x).expect("factor solve failed")
    }
    fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        self.0.solve_transpose(x).expect("transposed factor solve failed")
    }
}

/// Shared solver knobs.  The tolerance is absolute: iteration stops once
/// the true residual `‖b − A xₖ‖₂` falls to `tol` or below.
#[derive(Debug, Clone)]
pub struct KrylovConfig {
    pub tol: f64,
    pub max_iter: usize,
    /// Starting guess; zero when absent.
    pub x0: Option<Vec<f64>>,
    /// Use the flexible (Polak-Ribière) direction update in CG.  Needed
    /// when the preconditioner varies between applications, as an inner
    /// iterative solve does; the classical update is the default and
    /// the better choice for a fixed preconditioner.
    pub flexible: bool,
}

impl Default for KrylovConfig {
    fn default() -> Self {
        KrylovConfig { tol: 1e-10, max_iter: 10_000, x0: None, flexible: false }
    }
}

impl KrylovConfig {
    pub fn new(tol: f64, max_iter: usize) -> Self {
        KrylovConfig { tol, max_iter, x0: None, flexible: false }
    }

    pub fn flexible(mut self) -> Self {
        self.flexible = true;
        self
    }

    pub(crate) fn start(&self, n: usize) -> Vec<f64> {
        match &self.x0 {
            Some(x) => {
                assert_eq!(x.len(), n, "starting guess has wrong length");
                x.clone()
            }
            None => vec![0.0; n],
        }
    }
}

/// Why the iteration stopped.
#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    /// Residual tolerance reached.
    ResidualTol,
    /// Iteration budget exhausted before the tolerance.
    MaxIter,
    /// A solver invariant failed (lost positive definiteness, zero pivot).
    Breakdown(String),
}

/// Outcome of an iterative solve.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub solution: Vec<f64>,
    /// Iterations actually taken (matrix applies of the outer operator).
    pub iterations: usize,
    pub converged: bool,
    pub termination: Termination,
    /// True residuals `‖b − A xₖ‖₂`; entry 0 belongs to the start vector,
    /// so the length is `iterations + 1`.
    pub residual_history: Vec<f64>,
    pub wall_time: Duration,
}

impl SolveReport {
    pub fn final_residual(&self) -> f64 {
        *self.residual_history.last().expect("history is never empty")
    }

    /// Convergence history as CSV with header `step,res`.
    pub fn write_history_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "step,res")?;
        for (step, res) in self.residual_history.iter().enumerate() {
            writeln!(out, "{step},{res:e}")?;
        }
        Ok(())
    }
}

/// Book-keeping shared by the solver loops.
pub(crate) struct RunRecorder {
    started: std::time::Instant,
    history: Vec<f64>,
    tol: f64,
}

impl RunRecorder {
    pub(crate) fn new(tol: f64) -> Self {
        RunRecorder { started: std::time::Instant::now(), history: Vec::new(), tol }
    }

    /// Record one residual; report whether the tolerance is met.
    pub(crate) fn record(&mut self, res: f64) -> bool {
        self.history.push(res);
        res <= self.tol
    }

    pub(crate) fn finish(
        self,
        solution: Vec<f64>,
        converged: bool,
        termination: Termination,
    ) -> SolveReport {
        SolveReport {
            solution,
            iterations: self.history.len().saturating_sub(1),
            converged,
            termination,
            residual_history: self.history,
            wall_time: self.started.elapsed(),
        }
    }
}

pub(crate) fn residual_norm(a: &dyn LinearOperator, x: &[f64], b: &[f64]) -> f64 {
    let ax = a.apply(x);
    let mut s = 0.0;
    for (bi, axi) in b.iter().zip(&ax) {
        let d = bi - axi;
        s += d * d;
    }
    s.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_impls_agree_with_matvec() {
        let d = DenseMatrix::from_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let x = vec![1.0, -1.0];
        let op: &dyn LinearOperator = &d;
        assert_eq!(op.apply(&x), d.matvec(&x));
        assert_eq!(op.apply_transpose(&x), d.matvec_transpose(&x));
        assert_eq!((op.nrows(), op.ncols()), (2, 2));
    }

    #[test]
    fn csv_history_has_expected_shape() {
        let report = SolveReport {
            solution: vec![1.0],
            iterations: 2,
            converged: true,
            termination: Termination::ResidualTol,
            residual_history: vec![1.0, 0.25, 1e-12],
            wall_time: Duration::from_millis(1),
        };
        let mut buf = Vec::new();
        report.write_history_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "step,res");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,"));
        assert!(lines[3].starts_with("2,"));
        let res: f64 = lines[3].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(res, 1e-12);
    }
}
