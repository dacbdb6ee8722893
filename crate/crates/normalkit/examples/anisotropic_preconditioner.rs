//! Shows a structurally wrong preconditioner failing on purpose.
//!
//! Both runs solve the same stabilized 2D advection-diffusion system by
//! CG on the weighted normal equations.  Preconditioning with the
//! wind-aligned anisotropic stiffness matrix under the mass-matrix inner
//! product ignores the reaction term that the normal operator actually
//! contains, and the iteration counts blow up as ν shrinks.  The
//! reaction-diffusion preconditioner under the diffusion inner product
//! holds them at a handful.

use normalkit::xprmt::{fem_solve, FemPreconditioner, Wind};

fn main() {
    let cells = 32;
    println!("stabilized advection-diffusion, {cells}x{cells} mesh, x wind, stop 1e-5\n");
    println!("{:>8}  {:>16}  {:>18}", "nu", "anisotropic (L2)", "react-diff (H1)");
    for nu in [1e-2, 5e-3, 2.5e-3] {
        let weak =
            fem_solve(FemPreconditioner::L2Aniso, Wind::X, cells, nu, 1e-5, 20_000).unwrap();
        let strong =
            fem_solve(FemPreconditioner::RdDirect, Wind::X, cells, nu, 1e-5, 500).unwrap();
        assert!(weak.converged && strong.converged);
        println!("{:>8}  {:>16}  {:>18}", nu, weak.iterations, strong.iterations);
    }
}
