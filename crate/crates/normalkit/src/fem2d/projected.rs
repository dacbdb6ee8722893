//! The gradient-projected reaction-diffusion operator.
//!
//! Projecting `β u` onto discrete gradients before taking its square
//! turns the reaction term into `ν⁻¹ CᵀK⁻¹C`, with `C` the advection
//! matrix and `K` the stiffness matrix.  The operator
//!
//! ```text
//!     u ↦ ν K u + ν⁻¹ Cᵀ K⁻¹ C u
//! ```
//!
//! is dense because of the inner stiffness solve, so it is only ever
//! applied matrix-free: one advection product, one Cholesky solve, one
//! transposed advection product.  For a divergence-free wind and
//! homogeneous boundary data it coincides with the weighted normal
//! matrix `AᵀTA` of the unstabilized system under the H1 weight
//! `T = ν⁻¹K⁻¹`, which is what makes it the reference preconditioner.

use super::{assemble_advection, assemble_stiffness, StructuredMesh};
use crate::krylov::LinearOperator;
use crate::matkit::{CholeskyFactor, CsrMatrix, DenseMatrix, MatError};

pub struct ProjectedReactionDiffusion {
    nu: f64,
    stiffness: CsrMatrix,
    advection: CsrMatrix,
    factor: CholeskyFactor,
}

impl ProjectedReactionDiffusion {
    pub fn new(mesh: &StructuredMesh, nu: f64, beta: [f64; 2]) -> Result<Self, MatError> {
        if nu <= 0.0 {
            return Err(MatError::Invalid(format!("diffusion {nu} must be positive")));
        }
        let stiffness = assemble_stiffness(mesh);
        let advection = assemble_advection(mesh, beta);
        let factor = CholeskyFactor::from_csr(&stiffness)?;
        Ok(Self { nu, stiffness, advection, factor })
    }

    pub fn dimension(&self) -> usize {
        self.stiffness.rows()
    }

    /// Materialize the operator column by column.  Quadratic storage and
    /// one stiffness solve per column: meant for small meshes and tests.
    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.dimension();
        let mut out = DenseMatrix::zeros(n, n);
        let mut e = vec![0.0f64; n];
        for j in 0..n {
            e[j] = 1.0;
            let col = self.apply(&e);
            for i in 0..n {
                out.set(i, j, col[i]);
            }
            e[j] = 0.0;
        }
        out
    }
}

impl LinearOperator for ProjectedReactionDiffusion {
    fn nrows(&self) -> usize {
        self.dimension()
    }

    fn ncols(&self) -> usize {
        self.dimension()
    }

    fn apply(&self, u: &[f64]) -> Vec<f64> {
        let cu = self.advection.matvec(u);
        let kinv_cu = self.factor.solve_vec(&cu);
        let reaction = self.advection.matvec_transpose(&kinv_cu);
        let diffusion = self.stiffness.matvec(u);
        diffusion
            .iter()
            .zip(&reaction)
            .map(|(d, r)| self.nu * d + r / self.nu)
            .collect()
    }

    fn apply_transpose(&self, u: &[f64]) -> Vec<f64> {
        self.apply(u)
    }
}
