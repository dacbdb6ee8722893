//! Preconditions 1D convection-diffusion with the advection factor.
//!
//! As ν shrinks the matrix approaches the upwinded advection operator P,
//! so P becomes an ever better right factor: GMRES preconditioned by P
//! and CG on the normal equations with G = PᵀP both speed up as the
//! problem gets harder for unpreconditioned methods.  The run prints one
//! row per ν with both iteration counts.

use normalkit::fd1d::{advection_factor, assemble_upwind, Problem1d};
use normalkit::krylov::{cgne, gmres, FactorSolveOp, KrylovConfig, LinearOperator};
use normalkit::precond::PreconditionerHandle;

fn main() {
    let n = 2000;
    println!("upwind convection-diffusion, n = {n}, absolute stop 1e-5\n");
    println!("{:>8}  {:>10}  {:>9}", "nu", "gmres(P)", "cgne(PᵀP)");
    for nu in [1e-2, 1e-3, 1e-4, 1e-5] {
        let problem = Problem1d::boundary_layer(n, nu);
        let (a, b) = assemble_upwind(&problem, &|_| 1.0);
        let p = advection_factor(&problem).unwrap();

        let cfg = KrylovConfig::new(1e-5, 4 * n);
        let g = gmres(&a, Some(&FactorSolveOp(&p)), &b, &cfg);
        let ginv = PreconditionerHandle::from_factor("advection factor", Box::new(p));
        let c = cgne(&a, None, Some(&ginv as &dyn LinearOperator), &b, &cfg);

        assert!(g.converged && c.converged);
        println!("{:>8}  {:>10}  {:>9}", nu, g.iterations, c.iterations);
    }
}
