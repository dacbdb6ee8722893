//! Normal-equation preconditioning toolkit.
//!
//! Solves nonsymmetric linear systems `A x = b` by running conjugate
//! gradients on the (optionally weighted) normal equations
//! `Aᵀ T A x = Aᵀ T b` with an SPD preconditioner `G`.  The quality of a
//! right factor `P` is judged by how well `A P⁻¹` clusters its singular
//! values: an orthogonal `A P⁻¹` means convergence in one iteration.
//!
//! The crate is organised as a small stack:
//!
//! * [`matkit`]: dense, CSR and tridiagonal storage plus the
//!   factorizations the preconditioners are built from (QR, RQ, polar,
//!   Cholesky, banded LU) and Matrix Market I/O.
//! * [`krylov`]: CG on the normal equations, LSQR, full GMRES, plain
//!   preconditioned CG, iterative refinement, and spectrum/bound
//!   diagnostics for weighted singular values.
//! * [`precond`]: the `PreconditionerHandle` abstraction with
//!   factor-based, direct (Cholesky / banded LU), inner-CG, and geometric
//!   multigrid realizations.
//! * [`fd1d`]: 1D convection-diffusion finite differences (centered and
//!   upwind) and the discrete advection factor used to precondition them.
//! * [`fem2d`]: P1 finite elements on a structured triangulated unit
//!   square; advection-diffusion with streamline-diffusion stabilisation,
//!   mass/stiffness/anisotropic matrices, Riesz maps, and the projected
//!   reaction-diffusion operator.
//! * [`xprmt`]: the experiment harness behind the `normalkit` binary;
//!   runs the iteration-count studies, writes CSV/JSON results, and
//!   checks them against golden tables.
//!
//! Every solver records the true residual `‖A xₖ − b‖₂` per step, starts
//! from `x₀ = 0` unless told otherwise, and contains no randomness, so
//! repeated runs produce identical output.

pub mod fd1d;
pub mod fem2d;
pub mod krylov;
pub mod matkit;
pub mod precond;
pub mod xprmt;

pub use krylov::{KrylovConfig, LinearOperator, SolveReport, Termination};
pub use matkit::{CsrMatrix, DenseMatrix, Tridiagonal};
pub use precond::PreconditionerHandle;
