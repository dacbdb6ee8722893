//! Riesz maps weighting the normal equations.
//!
//! A weight `T` turns the normal equations into `AᵀTA x = AᵀT b`.  The
//! maps here identify a discrete functional with a function through an
//! inner product: the L2 map solves against the mass matrix (`T = M⁻¹`)
//! and the H1 map against the scaled stiffness matrix (`T = ν⁻¹K⁻¹`).
//! `T` itself is dense, so it is only ever applied through the sparse
//! Cholesky factorization of its inverse.

use super::{assemble_mass, assemble_stiffness, StructuredMesh};
use crate::krylov::LinearOperator;
use crate::matkit::{CholeskyFactor, CsrMatrix, MatError};

pub enum RieszMap {
    Identity,
    L2 { mass: CsrMatrix, factor: CholeskyFactor },
    H1 { nu: f64, stiffness: CsrMatrix, factor: CholeskyFactor },
}

impl RieszMap {
    pub fn identity() -> Self {
        RieszMap::Identity
    }

    /// Weight by the inverse mass matrix.
    pub fn l2(mesh: &StructuredMesh) -> Result<Self, MatError> {
        let mass = assemble_mass(mesh);
        let factor = CholeskyFactor::from_csr(&mass)?;
        Ok(RieszMap::L2 { mass, factor })
    }

    /// Weight by the scaled inverse stiffness matrix, `T = ν⁻¹K⁻¹`.
    pub fn h1(mesh: &StructuredMesh, nu: f64) -> Result<Self, MatError> {
        if nu <= 0.0 {
            return Err(MatError::Invalid(format!("diffusion {nu} must be positive")));
        }
        let stiffness = assemble_stiffness(mesh);
        let factor = CholeskyFactor::from_csr(&stiffness)?;
        Ok(RieszMap::H1 { nu, stiffness, factor })
    }

    /// `T r`.
    pub fn apply(&self, r: &[f64]) -> Vec<f64> {
        match self {
            RieszMap::Identity => r.to_vec(),
            RieszMap::L2 { factor, .. } => factor.solve_vec(r),
            RieszMap::H1 { nu, factor, .. } => {
                let mut x = factor.solve_vec(r);
                for v in &mut x {
                    *v /= nu;
                }
                x
            }
        }
    }

    /// `T⁻¹ r`, which stays sparse: a mass or scaled stiffness product.
    pub fn apply_inverse(&self, r: &[f64]) -> Vec<f64> {
        match self {
            RieszMap::Identity => r.to_vec(),
            RieszMap::L2 { mass, .. } => mass.matvec(r),
            RieszMap::H1 { nu, stiffness, .. } => {
                let mut x = stiffness.matvec(r);
                for v in &mut x {
                    *v *= nu;
                }
                x
            }
        }
    }

    /// The weight as an operator for the solvers, or `None` when it is
    /// the identity and the solvers can skip it.
    pub fn as_weight(&self) -> Option<&dyn LinearOperator> {
        match self {
            RieszMap::Identity => None,
            _ => Some(self),
        }
    }

    pub fn dimension(&self) -> Option<usize> {
        match self {
            RieszMap::Identity => None,
            RieszMap::L2 { mass, .. } => Some(mass.rows()),
            RieszMap::H1 { stiffness, .. } => Some(stiffness.rows()),
        }
    }
}

impl LinearOperator for RieszMap {
    fn nrows(&self) -> usize {
        self.dimension().unwrap_or(0)
    }

    fn ncols(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        RieszMap::apply(self, x)
    }

    fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        RieszMap::apply(self, x)
    }
}
