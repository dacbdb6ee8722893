//! Linear finite elements on a structured triangulation of the unit
//! square, for the advection-diffusion problem
//! `-ν Δu + β·∇u = f` with homogeneous Dirichlet data.
//!
//! The mesh splits an m×m grid of square cells along the lower-left to
//! upper-right diagonal.  Unknowns are the interior vertices; boundary
//! vertices carry the value zero and are eliminated from every assembled
//! matrix.  On this mesh all element integrals appearing here are
//! polynomial of degree at most two, so the edge-midpoint quadrature
//! rule used by the assembly is exact.
//!
//! Besides the stabilized system matrix the module assembles the
//! building blocks for normal-equation preconditioning: mass, stiffness,
//! advection, and anisotropic matrices, the reaction-diffusion
//! combination `νK + ν⁻¹|β|²M`, its gradient-projected counterpart
//! `νK + ν⁻¹CᵀK⁻¹C` as a matrix-free operator, and the Riesz maps that
//! weight the normal equations.

mod assemble;
mod projected;
mod riesz;

pub use assemble::{
    assemble_advdiff, assemble_advdiff_full, assemble_advection, assemble_anisotropic,
    assemble_mass, assemble_mass_full, assemble_reaction_diffusion, assemble_stiffness,
    assemble_stiffness_full,
};
pub use projected::ProjectedReactionDiffusion;
pub use riesz::RieszMap;

use crate::matkit::MatError;

/// Uniform criss-cross triangulation of `[0,1]²` with `cells` squares
/// per side, each cut into two triangles.
#[derive(Debug, Clone, Copy)]
pub struct StructuredMesh {
    cells: usize,
}

impl StructuredMesh {
    pub fn new(cells: usize) -> Result<Self, MatError> {
        if cells < 2 {
            return Err(MatError::Invalid(format!(
                "{cells} cells leave no interior vertices"
            )));
        }
        Ok(StructuredMesh { cells })
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn h(&self) -> f64 {
        1.0 / self.cells as f64
    }

    /// All vertices, boundary included.
    pub fn node_count(&self) -> usize {
        (self.cells + 1) * (self.cells + 1)
    }

    pub fn interior_count(&self) -> usize {
        (self.cells - 1) * (self.cells - 1)
    }

    /// Full-grid index of vertex `(i, j)`.
    pub fn node_index(&self, i: usize, j: usize) -> usize {
        j * (self.cells + 1) + i
    }

    /// Unknown number of vertex `(i, j)`, or `None` on the boundary.
    pub fn interior_index(&self, i: usize, j: usize) -> Option<usize> {
        let m = self.cells;
        if i == 0 || j == 0 || i == m || j == m {
            None
        } else {
            Some((j - 1) * (m - 1) + (i - 1))
        }
    }

    pub fn node_position(&self, i: usize, j: usize) -> (f64, f64) {
        (i as f64 * self.h(), j as f64 * self.h())
    }
}

/// Coefficients of the advection-diffusion equation and its
/// streamline-diffusion stabilization.
#[derive(Debug, Clone, Copy)]
pub struct FemProblem2d {
    /// Diffusion coefficient `ν > 0`.
    pub nu: f64,
    /// Constant wind, kept at unit length in the experiments.
    pub beta: [f64; 2],
    /// Streamline-diffusion parameter; zero disables stabilization.
    pub delta_sd: f64,
}

impl FemProblem2d {
    pub const DEFAULT_DELTA_SD: f64 = 1e-4;

    pub fn new(nu: f64, beta: [f64; 2]) -> Self {
        FemProblem2d { nu, beta, delta_sd: Self::DEFAULT_DELTA_SD }
    }

    /// Wind `(1, 0)`.
    pub fn x_wind(nu: f64) -> Self {
        Self::new(nu, [1.0, 0.0])
    }

    /// Wind `(1, 1)/√2`.
    pub fn diagonal_wind(nu: f64) -> Self {
        Self::new(nu, [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2])
    }

    pub fn without_stabilization(mut self) -> Self {
        self.delta_sd = 0.0;
        self
    }
}
