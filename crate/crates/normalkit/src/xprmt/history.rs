use std::fs;
use std::path::{Path, PathBuf};

use super::fem::{fem_solve, FemPreconditioner, Wind};
use crate::krylov::SolveReport;
use crate::matkit::MatError;

pub const HISTORY_MESHES: &[usize] = &[32, 64, 128, 256];
pub const HISTORY_NUS: &[f64] = &[1.25e-3, 2.5e-3, 1e-2];
pub const HISTORY_TOL: f64 = 1e-5;
pub const HISTORY_CAP: usize = 200;

/// File name for one convergence trace, e.g.
/// `fem_advection_mass_normal_eq_diagflow_0.0025_64.0.csv`.
pub fn history_file_name(wind: Wind, nu: f64, cells: usize) -> String {
    format!("fem_advection_mass_normal_eq_{}_{}_{}.0.csv", wind.flow_token(), nu, cells)
}

/// Solves one multigrid-preconditioned case and writes the per-step true
/// residual norms to `dir` as a `step,res` CSV.
pub fn run_history_case(
    dir: &Path,
    wind: Wind,
    nu: f64,
    cells: usize,
) -> Result<(PathBuf, SolveReport), MatError> {
    let report = fem_solve(FemPreconditioner::RdGmg, wind, cells, nu, HISTORY_TOL, HISTORY_CAP)?;
    let path = dir.join(history_file_name(wind, nu, cells));
    let mut file = fs::File::create(&path)?;
    report.write_history_csv(&mut file)?;
    Ok((path, report))
}

/// Full sweep over meshes and diffusion coefficients; returns the files
/// written, one per case.
pub fn run_history(
    dir: &Path,
    wind: Wind,
    meshes: &[usize],
    nus: &[f64],
) -> Result<Vec<(PathBuf, SolveReport)>, MatError> {
    let mut written = Vec::new();
    for &nu in nus {
        for &cells in meshes {
            written.push(run_history_case(dir, wind, nu, cells)?);
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_names_spell_out_wind_and_parameters() {
        assert_eq!(
            history_file_name(Wind::Diagonal, 2.5e-3, 64),
            "fem_advection_mass_normal_eq_diagflow_0.0025_64.0.csv"
        );
        assert_eq!(
            history_file_name(Wind::X, 1e-2, 128),
            "fem_advection_mass_normal_eq_xflow_0.01_128.0.csv"
        );
        assert_eq!(
            history_file_name(Wind::Diagonal, 1.25e-3, 256),
            "fem_advection_mass_normal_eq_diagflow_0.00125_256.0.csv"
        );
    }

    #[test]
    fn traces_are_well_formed_and_deterministic() {
        let dir = std::env::temp_dir().join("normalkit-history-test");
        fs::create_dir_all(&dir).unwrap();
        let (path, report) = run_history_case(&dir, Wind::Diagonal, 1e-2, 16).unwrap();
        assert!(report.converged);
        let first = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = first.lines().collect();
        assert_eq!(lines[0], "step,res");
        assert_eq!(lines.len(), report.residual_history.len() + 1);
        assert!(lines[1].starts_with("0,"));
        let last: f64 = lines.last().unwrap().split(',').nth(1).unwrap().parse().unwrap();
        assert!(last <= HISTORY_TOL);

        let (_, again) = run_history_case(&dir, Wind::Diagonal, 1e-2, 16).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), first);
        assert_eq!(again.residual_history, report.residual_history);
        fs::remove_dir_all(&dir).ok();
    }
}
