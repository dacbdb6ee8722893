//! Preconditioners for the normal equations.
//!
//! A preconditioner here is an SPD matrix `G` whose inverse apply is
//! cheap.  For normal-equation CG the natural family is `G = Pᵀ T P`
//! with `P` an invertible factor: applying `G⁻¹` is two factor solves
//! around one weight apply, and the preconditioned spectrum equals the
//! T-weighted singular value spectrum of `A P⁻¹`.  `G` can also be
//! given directly (factored sparse matrix, inner CG solve, geometric
//! multigrid) when the factor form is unavailable or too expensive.

mod gmg;

pub use gmg::{GmgHierarchy, GmgOptions};

use crate::krylov::{pcg, FactorSolveOp, KrylovConfig, LinearOperator};
use crate::matkit::{BandedLuFactor, CholeskyFactor, CsrMatrix, DenseMatrix, FactorSolve, MatError};

enum Realization {
    Identity {
        n: usize,
    },
    /// `G = Pᵀ T P`; applies `P⁻¹ T⁻¹ P⁻ᵀ`.
    Factor {
        p: Box<dyn FactorSolve>,
        t_inv: Option<Box<dyn LinearOperator>>,
    },
    /// `G` factored once; applies the factor solve.
    Direct {
        g: Box<dyn FactorSolve>,
    },
    /// `G` available only as an operator; applies it by an inner CG
    /// solve tight enough to act as a fixed linear map.
    InnerCg {
        g: Box<dyn LinearOperator>,
        inner_prec: Option<Box<dyn FactorSolve>>,
        tol_rel: f64,
        max_iter: usize,
    },
    /// Geometric multigrid V-cycles on `G`.
    Multigrid {
        hierarchy: GmgHierarchy,
    },
}

/// An SPD preconditioner, realized one of several ways but always
/// consumed the same way: [`PreconditionerHandle::apply_inverse`].
///
/// The handle implements [`LinearOperator`] as the map `r ↦ G⁻¹ r`, so
/// it plugs directly into the solvers' preconditioner slots.
pub struct PreconditionerHandle {
    realization: Realization,
    description: String,
}

impl PreconditionerHandle {
    /// No preconditioning: `G = I`.
    pub fn identity(n: usize) -> Self {
        Self { realization: Realization::Identity { n }, description: "identity".into() }
    }

    /// `G = Pᵀ P` from an invertible factor.
    pub fn from_factor(description: impl Into<String>, p: Box<dyn FactorSolve>) -> Self {
        Self {
            realization: Realization::Factor { p, t_inv: None },
            description: description.into(),
        }
    }

    /// `G = Pᵀ T P`: the factor plus the *inverse* of the weight as an
    /// operator (for a Riesz map `T = M⁻¹` this is the matrix `M`).
    pub fn from_weighted_factor(
        description: impl Into<String>,
        p: Box<dyn FactorSolve>,
        t_inv: Box<dyn LinearOperator>,
    ) -> Self {
        Self {
            realization: Realization::Factor { p, t_inv: Some(t_inv) },
            description: description.into(),
        }
    }

    /// `G` given sparse and SPD; factored by banded Cholesky.
    pub fn cholesky_csr(description: impl Into<String>, g: &CsrMatrix) -> Result<Self, MatError> {
        let factor = CholeskyFactor::from_csr(g)?;
        Ok(Self {
            realization: Realization::Direct { g: Box::new(factor) },
            description: description.into(),
        })
    }

    /// `G` given dense and SPD; factored by dense Cholesky.
    pub fn cholesky_dense(
        description: impl Into<String>,
        g: &DenseMatrix,
    ) -> Result<Self, MatError> {
        let factor = CholeskyFactor::from_dense(g)?;
        Ok(Self {
            realization: Realization::Direct { g: Box::new(factor) },
            description: description.into(),
        })
    }

    /// `G` given sparse and symmetric but factored by banded LU with
    /// pivoting, for matrices too indefinite-looking for Cholesky.
    pub fn banded_lu(description: impl Into<String>, g: &CsrMatrix) -> Result<Self, MatError> {
        let factor = BandedLuFactor::from_csr(g)?;
        Ok(Self {
            realization: Realization::Direct { g: Box::new(factor) },
            description: description.into(),
        })
    }

    /// `G` wrapped around an already-built factor solve.
    pub fn from_direct(description: impl Into<String>, g: Box<dyn FactorSolve>) -> Self {
        Self { realization: Realization::Direct { g }, description: description.into() }
    }

    /// `G` applied through an inner CG solve on `G z = r`.
    ///
    /// The inner tolerance is relative to `‖r‖` and should be tight
    /// (1e-10 or so): a loose inner solve makes the preconditioner vary
    /// between outer iterations, which plain CG does not tolerate.  The
    /// apply returns the best iterate even if the budget runs out.
    pub fn inner_cg(
        description: impl Into<String>,
        g: Box<dyn LinearOperator>,
        inner_prec: Option<Box<dyn FactorSolve>>,
        tol_rel: f64,
        max_iter: usize,
    ) -> Self {
        Self {
            realization: Realization::InnerCg { g, inner_prec, tol_rel, max_iter },
            description: description.into(),
        }
    }

    /// `G` applied through geometric multigrid V-cycles.  The matrix
    /// must live on the interior nodes of a structured square grid with
    /// `cells` cells per side.
    pub fn multigrid(
        description: impl Into<String>,
        g: &CsrMatrix,
        cells: usize,
        options: GmgOptions,
    ) -> Result<Self, MatError> {
        let hierarchy = GmgHierarchy::build(g, cells, options)?;
        Ok(Self {
            realization: Realization::Multigrid { hierarchy },
            description: description.into(),
        })
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn dimension(&self) -> usize {
        match &self.realization {
            Realization::Identity { n } => *n,
            Realization::Factor { p, .. } => p.nrows(),
            Realization::Direct { g } => g.nrows(),
            Realization::InnerCg { g, .. } => g.nrows(),
            Realization::Multigrid { hierarchy } => hierarchy.fine_dimension(),
        }
    }

    /// `z = G⁻¹ r`.
    pub fn apply_inverse(&self, r: &[f64]) -> Vec<f64> {
        match &self.realization {
            Realization::Identity { .. } => r.to_vec(),
            Realization::Factor { p, t_inv } => {
                let u = p.solve_transpose(r).expect("factor solve failed");
                let w = match t_inv {
                    Some(op) => op.apply(&u),
                    None => u,
                };
                p.solve(&w).expect("factor solve failed")
            }
            Realization::Direct { g } => g.solve(r).expect("direct solve failed"),
            Realization::InnerCg { g, inner_prec, tol_rel, max_iter } => {
                let mut norm = 0.0;
                for v in r {
                    norm += v * v;
                }
                let cfg = KrylovConfig::new(tol_rel * norm.sqrt(), *max_iter);
                let op;
                let prec: Option<&dyn LinearOperator> = match inner_prec {
                    Some(f) => {
                        op = FactorSolveOp(f.as_ref());
                        Some(&op)
                    }
                    None => None,
                };
                pcg(g.as_ref(), prec, r, &cfg).solution
            }
            Realization::Multigrid { hierarchy } => hierarchy.apply(r),
        }
    }
}

impl LinearOperator for PreconditionerHandle {
    fn nrows(&self) -> usize {
        self.dimension()
    }
    fn ncols(&self) -> usize {
        self.dimension()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.apply_inverse(x)
    }
    fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        self.apply_inverse(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krylov::cgne;
    use crate::matkit::test_support::{assert_close, TestRng};
    use crate::matkit::{qr_tridiagonal, Tridiagonal};

    #[test]
    fn identity_is_a_copy() {
        let h = PreconditionerHandle::identity(3);
        assert_eq!(h.apply_inverse(&[1.0, -2.0, 0.5]), vec![1.0, -2.0, 0.5]);
        assert_eq!(h.dimension(), 3);
    }

    #[test]
    fn factor_realization_applies_gram_inverse() {
        // G = PᵀP with P tridiagonal: check G · apply_inverse(r) = r.
        let n = 25;
        let p = Tridiagonal::from_constant(n, -0.4, 2.0, -0.7);
        let handle = PreconditionerHandle::from_factor("gram of banded factor", Box::new(p.clone()));
        let mut rng = TestRng::new(1201);
        let r: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
        let z = handle.apply_inverse(&r);
        let pz = p.matvec(&z);
        let gz = p.matvec_transpose(&pz);
        for (gi, ri) in gz.iter().zip(&r) {
            assert_close(*gi, *ri, 1e-12);
        }
    }

    #[test]
    fn qr_factor_preconditions_cgne_to_one_step() {
        let n = 50;
        let a = Tridiagonal::from_constant(n, -1.3, 2.4, -0.2);
        let r = qr_tridiagonal(&a).unwrap();
        let handle = PreconditionerHandle::from_factor("triangular factor", Box::new(r));
        let b: Vec<f64> = (0..n).map(|i| (0.19 * i as f64).sin()).collect();
        let report = cgne(&a, None, Some(&handle), &b, &KrylovConfig::new(1e-10, 20));
        assert!(report.converged);
        assert_eq!(report.iterations, 1);
    }

    #[test]
    fn weighted_factor_matches_dense_assembly() {
        // G = PᵀTP with T tridiagonal SPD: apply_inverse against a dense
        // inverse of the assembled G.
        let n = 12;
        let p_band = Tridiagonal::from_constant(n, -0.3, 1.8, -0.5);
        let t_inv_band = Tridiagonal::from_constant(n, 0.2, 1.5, 0.2);
        let handle = PreconditionerHandle::from_weighted_factor(
            "weighted factor",
            Box::new(p_band.clone()),
            Box::new(t_inv_band.clone()),
        );
        let p = p_band.to_dense();
        let t = t_inv_band.to_dense().inverse().unwrap();
        let g = p.matmul_transpose_left(&t.matmul(&p));
        let ginv = g.inverse().unwrap();
        let mut rng = TestRng::new(1202);
        let r: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
        let want = ginv.matvec(&r);
        let got = handle.apply_inverse(&r);
        for (gi, wi) in got.iter().zip(&want) {
            assert_close(*gi, *wi, 1e-10);
        }
    }

    #[test]
    fn direct_cholesky_matches_inner_cg() {
        let n = 30;
        let g_band = Tridiagonal::from_constant(n, -1.0, 4.0, -1.0);
        let g_csr = g_band.to_csr();
        let direct = PreconditionerHandle::cholesky_csr("factored", &g_csr).unwrap();
        let iterative = PreconditionerHandle::inner_cg(
            "inner cg",
            Box::new(g_csr.clone()),
            None,
            1e-13,
            1000,
        );
        let mut rng = TestRng::new(1203);
        let r: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
        let a = direct.apply_inverse(&r);
        let b = iterative.apply_inverse(&r);
        for (x, y) in a.iter().zip(&b) {
            assert_close(*x, *y, 1e-10);
        }
    }

    #[test]
    fn banded_lu_realization_solves_indefinite_symmetric() {
        let n = 10;
        // Symmetric but indefinite: Cholesky refuses, banded LU works.
        let g = Tridiagonal::from_constant(n, 2.0, 1.0, 2.0).to_csr();
        assert!(PreconditionerHandle::cholesky_csr("won't factor", &g).is_err());
        let h = PreconditionerHandle::banded_lu("pivoted", &g).unwrap();
        let mut rng = TestRng::new(1204);
        let r: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
        let z = h.apply_inverse(&r);
        let back = g.matvec(&z);
        for (bi, ri) in back.iter().zip(&r) {
            assert_close(*bi, *ri, 1e-11);
        }
    }

    #[test]
    fn handle_plugs_in_as_linear_operator() {
        let h = PreconditionerHandle::identity(4);
        let op: &dyn LinearOperator = &h;
        assert_eq!(op.nrows(), 4);
        assert_eq!(op.apply(&[1.0, 2.0, 3.0, 4.0]), vec![1.0, 2.0, 3.0, 4.0]);
    }
}
