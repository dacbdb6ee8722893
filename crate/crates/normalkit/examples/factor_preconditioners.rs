//! Compares factorization-based normal preconditioners on one system.
//!
//! The system is scaled centered-difference convection-diffusion with
//! ν = β = 1.  Four right factors P are tried, each as the normal
//! preconditioner G = PᵀP for CG on AᵀAx = Aᵀb: the QR and RQ triangular
//! factors, the symmetric polar factor (so G is its square, solved by
//! Cholesky), and the Gram matrix AAᵀ itself, which is the square of the
//! polar factor of Aᵀ.  A P whose quotient AP⁻¹ is orthogonal gives
//! convergence in one iteration; the RQ factor shows how badly an
//! equally valid triangular factor can do.

use normalkit::krylov::{cgne, KrylovConfig, LinearOperator};
use normalkit::matkit::{polar, qr, rq, CholeskyFactor, DenseTriangular, UpLo};
use normalkit::precond::PreconditionerHandle;
use normalkit::xprmt::scaled_centered_system;

fn main() {
    let n = 100;
    let (a, rhs) = scaled_centered_system(n);
    let dense = a.to_dense();
    let a_csr = a.to_csr();
    let gram = a_csr.matmul(&a_csr.transpose()).unwrap();

    let handles = [
        PreconditionerHandle::from_factor(
            "qr upper factor",
            Box::new(DenseTriangular::new(qr(&dense).unwrap().r, UpLo::Upper).unwrap()),
        ),
        PreconditionerHandle::from_factor(
            "rq upper factor",
            Box::new(DenseTriangular::new(rq(&dense).unwrap().r, UpLo::Upper).unwrap()),
        ),
        PreconditionerHandle::from_factor(
            "symmetric polar factor",
            Box::new(CholeskyFactor::from_dense(&polar(&dense).unwrap().h).unwrap()),
        ),
        PreconditionerHandle::cholesky_csr("gram matrix A Aᵀ", &gram).unwrap(),
    ];

    let cfg = KrylovConfig::new(1e-10, 1000);
    println!("centered convection-diffusion, n = {n}, tolerance 1e-10\n");
    println!("{:<24} {:>10}  {:>13}", "factor", "iterations", "final ‖Ax-b‖");
    for ginv in &handles {
        let report = cgne(&a, None, Some(ginv as &dyn LinearOperator), &rhs, &cfg);
        println!(
            "{:<24} {:>10}  {:>13.3e}",
            ginv.description(),
            report.iterations,
            report.final_residual()
        );
    }
}
