//! Demonstrates that CGNE and LSQR walk the same path.
//!
//! With the same right factor P, CG on the normal equations with
//! G = PᵀP and LSQR on AP⁻¹ produce the same iterates in exact
//! arithmetic; in floating point their residual histories agree to many
//! digits until round-off separates them near the floor.  LSQR's
//! bidiagonalization keeps it a little more accurate at tight
//! tolerances, which is why both exist in the library.

use normalkit::fd1d::{advection_factor, assemble_upwind, Problem1d};
use normalkit::krylov::{cgne, lsqr, KrylovConfig, LinearOperator};
use normalkit::precond::PreconditionerHandle;

fn main() {
    let problem = Problem1d::boundary_layer(100, 1e-3);
    let (a, b) = assemble_upwind(&problem, &|_| 1.0);
    let p = advection_factor(&problem).unwrap();

    let cfg = KrylovConfig::new(1e-8, 60);
    let from_lsqr = lsqr(&a, Some(&p), &b, &cfg);
    let ginv = PreconditionerHandle::from_factor("advection factor", Box::new(p));
    let from_cgne = cgne(&a, None, Some(&ginv as &dyn LinearOperator), &b, &cfg);

    println!("{:>4}  {:>13}  {:>13}  {:>10}", "step", "cgne ‖r‖", "lsqr ‖r‖", "rel diff");
    let steps = from_cgne.residual_history.len().min(from_lsqr.residual_history.len());
    let norm_b = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let floor_guard = 1e-9 * norm_b;
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    for k in 0..steps {
        let c = from_cgne.residual_history[k];
        let l = from_lsqr.residual_history[k];
        let rel = (c - l).abs() / c.max(l);
        if c.max(l) > floor_guard {
            worst = worst.max(rel);
            compared += 1;
        }
        if k % 3 == 0 || k + 1 == steps {
            println!("{k:>4}  {c:>13.6e}  {l:>13.6e}  {rel:>10.2e}");
        }
    }
    assert!(worst < 1e-6, "histories diverged: {worst:.2e}");
    println!(
        "\nlargest relative gap over the {compared} steps above {floor_guard:.1e}: {worst:.2e}"
    );
}
