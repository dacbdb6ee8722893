//! Predicts iteration counts from weighted singular values.
//!
//! For a right factor P, the convergence of CG on the normal equations
//! is governed by the spread of the singular values of AP⁻¹: the error
//! after k steps shrinks at least like 2((κ−1)/(κ+1))ᵏ in the energy
//! norm, where κ is the ratio of extreme singular values.  The run
//! computes that spectrum for the upwind advection factor at several ν,
//! turns the bound into a predicted iteration count, and puts the
//! observed count next to it.

use normalkit::fd1d::{advection_factor, assemble_upwind, Problem1d};
use normalkit::krylov::{
    cgne, right_preconditioned_matrix, t_singular_values, KrylovConfig, LinearOperator,
};
use normalkit::precond::PreconditionerHandle;

fn main() {
    let n = 200;
    let reduction = 1e-8;
    println!("upwind system, n = {n}, advection right factor\n");
    println!(
        "{:>8}  {:>9}  {:>9}  {:>7}  {:>15}  {:>8}",
        "nu", "sigma min", "sigma max", "kappa", "predicted steps", "observed"
    );
    for nu in [1e-2, 1e-3, 1e-4] {
        let problem = Problem1d::boundary_layer(n, nu);
        let (a, b) = assemble_upwind(&problem, &|_| 1.0);
        let p = advection_factor(&problem).unwrap();

        let w = right_preconditioned_matrix(&a.to_dense(), &p).unwrap();
        let spectrum = t_singular_values(&w, None).unwrap();
        let predicted = spectrum.cg_iteration_bound(reduction).unwrap();

        let ginv = PreconditionerHandle::from_factor("advection factor", Box::new(p));
        let norm_b = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        let cfg = KrylovConfig::new(reduction * norm_b, 10 * n);
        let report = cgne(&a, None, Some(&ginv as &dyn LinearOperator), &b, &cfg);

        assert!(report.converged);
        assert!(report.iterations <= predicted);
        println!(
            "{:>8}  {:>9.3e}  {:>9.3e}  {:>7.2}  {:>15}  {:>8}",
            nu,
            spectrum.min(),
            spectrum.max(),
            spectrum.kappa(),
            predicted,
            report.iterations
        );
    }
    println!("\nobserved counts never exceed the bound from the singular values");
}
