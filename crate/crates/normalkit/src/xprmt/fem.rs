use std::collections::BTreeMap;

use super::table::{Cell, Metadata, TableResult, TableRow};
use crate::fem2d::{
    assemble_advdiff, assemble_anisotropic, assemble_reaction_diffusion, FemProblem2d,
    ProjectedReactionDiffusion, RieszMap, StructuredMesh,
};
use crate::krylov::{cgne, KrylovConfig, LinearOperator, SolveReport};
use crate::matkit::{CholeskyFactor, MatError};
use crate::precond::{GmgHierarchy, GmgOptions, PreconditionerHandle};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wind {
    X,
    Diagonal,
}

impl Wind {
    pub fn label(self) -> &'static str {
        match self {
            Wind::X => "x",
            Wind::Diagonal => "diag",
        }
    }

    /// Token used in convergence-history file names.
    pub fn flow_token(self) -> &'static str {
        match self {
            Wind::X => "xflow",
            Wind::Diagonal => "diagflow",
        }
    }

    pub fn problem(self, nu: f64) -> FemProblem2d {
        match self {
            Wind::X => FemProblem2d::x_wind(nu),
            Wind::Diagonal => FemProblem2d::diagonal_wind(nu),
        }
    }
}

/// The normal-equation preconditioners exercised on the 2D problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FemPreconditioner {
    /// Wind-aligned anisotropic stiffness matrix, paired with the mass
    /// inner product.  Deliberately too weak: it certifies that iteration
    /// counts explode without the reaction-diffusion term.
    L2Aniso,
    /// Reaction-diffusion matrix `νK + ν⁻¹|β|²M`, Cholesky factored,
    /// paired with the diffusion inner product.
    RdDirect,
    /// The projected operator `νK + ν⁻¹CᵀK⁻¹C` inverted by an inner
    /// conjugate-gradient loop guided by the reaction-diffusion matrix.
    RdProjected,
    /// The projected operator inverted coarsely by an inner
    /// conjugate-gradient loop whose own preconditioner is a symmetric
    /// multigrid V-cycle of the reaction-diffusion matrix.
    RdGmg,
}

impl FemPreconditioner {
    pub fn name(self) -> &'static str {
        match self {
            FemPreconditioner::L2Aniso => "l2-aniso",
            FemPreconditioner::RdDirect => "rd-direct",
            FemPreconditioner::RdProjected => "rd-projected",
            FemPreconditioner::RdGmg => "rd-gmg",
        }
    }

    pub fn default_wind(self) -> Wind {
        match self {
            FemPreconditioner::RdGmg => Wind::Diagonal,
            _ => Wind::X,
        }
    }

    pub fn default_meshes(self) -> &'static [usize] {
        match self {
            FemPreconditioner::L2Aniso => &[128],
            _ => &[32, 64, 128],
        }
    }

    fn max_iter(self) -> usize {
        match self {
            FemPreconditioner::L2Aniso => 20_000,
            _ => 500,
        }
    }

    fn riesz_label(self) -> &'static str {
        match self {
            FemPreconditioner::L2Aniso => "mass",
            _ => "diffusion",
        }
    }
}

pub const FEM_DEFAULT_NUS: &[f64] = &[1e-2, 5e-3, 2.5e-3, 1.25e-3];
pub const FEM_TOL: f64 = 1e-5;

/// Relative residual reduction asked of the V-cycle-driven inner solve.
/// Coarse on purpose: each preconditioner application costs a handful
/// of V-cycles and the outer iteration absorbs the leftover error.
const RD_GMG_INNER_TOL: f64 = 0.175;
const RD_GMG_INNER_CAP: usize = 50;

fn build_preconditioner(
    kind: FemPreconditioner,
    mesh: &StructuredMesh,
    nu: f64,
    beta: [f64; 2],
) -> Result<PreconditionerHandle, MatError> {
    match kind {
        FemPreconditioner::L2Aniso => PreconditionerHandle::cholesky_csr(
            "wind-aligned anisotropic stiffness",
            &assemble_anisotropic(mesh, beta),
        ),
        FemPreconditioner::RdDirect => PreconditionerHandle::cholesky_csr(
            "reaction-diffusion, Cholesky",
            &assemble_reaction_diffusion(mesh, nu, beta)?,
        ),
        FemPreconditioner::RdProjected => {
            let projected = ProjectedReactionDiffusion::new(mesh, nu, beta)?;
            let guide =
                CholeskyFactor::from_csr(&assemble_reaction_diffusion(mesh, nu, beta)?)?;
            Ok(PreconditionerHandle::inner_cg(
                "projected reaction-diffusion, inner cg",
                Box::new(projected),
                Some(Box::new(guide)),
                1e-10,
                500,
            ))
        }
        FemPreconditioner::RdGmg => {
            let projected = ProjectedReactionDiffusion::new(mesh, nu, beta)?;
            let vcycle = GmgHierarchy::build(
                &assemble_reaction_diffusion(mesh, nu, beta)?,
                mesh.cells(),
                GmgOptions::default(),
            )?;
            Ok(PreconditionerHandle::inner_cg(
                "projected reaction-diffusion, V-cycle inner cg",
                Box::new(projected),
                Some(Box::new(vcycle)),
                RD_GMG_INNER_TOL,
                RD_GMG_INNER_CAP,
            ))
        }
    }
}

/// One solve of the stabilized advection-diffusion system with unit
/// forcing, weighted by the preconditioner's inner product.
pub fn fem_solve(
    kind: FemPreconditioner,
    wind: Wind,
    cells: usize,
    nu: f64,
    tol: f64,
    max_iter: usize,
) -> Result<SolveReport, MatError> {
    let mesh = StructuredMesh::new(cells)?;
    let problem = wind.problem(nu);
    let (a, b) = assemble_advdiff(&mesh, &problem, &|_, _| 1.0);
    let riesz = match kind {
        FemPreconditioner::L2Aniso => RieszMap::l2(&mesh)?,
        _ => RieszMap::h1(&mesh, nu)?,
    };
    let ginv = build_preconditioner(kind, &mesh, nu, problem.beta)?;
    let mut cfg = KrylovConfig::new(tol, max_iter);
    if kind == FemPreconditioner::RdGmg {
        cfg = cfg.flexible();
    }
    Ok(cgne(&a, riesz.as_weight(), Some(&ginv as &dyn LinearOperator), &b, &cfg))
}

/// Mesh-refinement sweep for one preconditioner family: rows are
/// diffusion coefficients, columns are cells per side.
pub fn run_fem_experiment(
    kind: FemPreconditioner,
    wind: Wind,
    meshes: &[usize],
    nus: &[f64],
) -> Result<TableResult, MatError> {
    let mut rows = Vec::new();
    for &nu in nus {
        let mut cells = Vec::new();
        for &m in meshes {
            let report = fem_solve(kind, wind, m, nu, FEM_TOL, kind.max_iter())?;
            cells.push(Cell::from_report(&report));
        }
        rows.push(TableRow { param: nu.to_string(), cells });
    }
    Ok(TableResult {
        experiment: kind.name().to_string(),
        row_label: "nu".to_string(),
        col_labels: meshes.iter().map(|m| m.to_string()).collect(),
        rows,
        metadata: Metadata {
            solver: "cgne".to_string(),
            riesz: kind.riesz_label().to_string(),
            preconditioner: kind.name().to_string(),
            tol_abs: FEM_TOL,
            max_iter: kind.max_iter(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: BTreeMap::from([
                ("wind".to_string(), wind.label().to_string()),
                ("forcing".to_string(), "1".to_string()),
                ("delta_sd".to_string(), FemProblem2d::DEFAULT_DELTA_SD.to_string()),
                ("element".to_string(), "p1 criss-cross".to_string()),
            ]),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projected_preconditioner_needs_a_handful_of_steps() {
        let table =
            run_fem_experiment(FemPreconditioner::RdProjected, Wind::X, &[16, 32], &[5e-3])
                .unwrap();
        for cell in &table.rows[0].cells {
            assert!(cell.converged);
            assert!(cell.iterations >= 1 && cell.iterations <= 5, "{}", cell.iterations);
        }
        let spread = table.rows[0].cells[0].iterations.abs_diff(table.rows[0].cells[1].iterations);
        assert!(spread <= 1);
    }

    #[test]
    fn projection_separates_the_two_reaction_diffusion_variants() {
        // Dropping the gradient projection weakens the preconditioner
        // badly: the unprojected matrix overestimates the advection
        // block on cross-wind modes, so its counts sit far above the
        // projected operator's.
        let direct =
            fem_solve(FemPreconditioner::RdDirect, Wind::X, 32, 5e-3, FEM_TOL, 200).unwrap();
        let projected =
            fem_solve(FemPreconditioner::RdProjected, Wind::X, 32, 5e-3, FEM_TOL, 200).unwrap();
        assert!(direct.converged && projected.converged);
        assert!(projected.iterations <= 5, "{}", projected.iterations);
        assert!(direct.iterations >= 4 * projected.iterations, "{}", direct.iterations);
    }

    #[test]
    fn multigrid_counts_stay_flat_across_meshes() {
        let table = run_fem_experiment(FemPreconditioner::RdGmg, Wind::Diagonal, &[16, 32], &[1e-2])
            .unwrap();
        for cell in &table.rows[0].cells {
            assert!(cell.converged);
            assert!(cell.iterations <= 12, "{}", cell.iterations);
        }
        let spread = table.rows[0].cells[0].iterations.abs_diff(table.rows[0].cells[1].iterations);
        assert!(spread <= 3, "{:?}", table.rows[0].cells);
    }

    #[test]
    fn mass_weighted_anisotropic_preconditioner_stalls() {
        let report =
            fem_solve(FemPreconditioner::L2Aniso, Wind::X, 32, 1e-2, FEM_TOL, 60).unwrap();
        assert!(!report.converged);
    }
}
