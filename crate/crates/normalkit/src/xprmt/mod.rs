//! Experiment drivers.
//!
//! Each driver assembles a problem, runs the solvers, and returns a
//! [`TableResult`] of iteration counts.  Bundled reference tables in
//! `golden/` record the expected counts together with per-table slack
//! rules; [`compare`] checks a result against a reference.

mod factors;
mod fd;
mod fem;
pub mod golden;
mod history;
pub mod table;

pub use factors::{
    run_factor_sweep, scaled_centered_system, FACTOR_SWEEP_CAP, FACTOR_SWEEP_SIZES,
    FACTOR_SWEEP_TOL,
};
pub use fd::{run_fd_sweep, FdScheme, SweepPoint, FD_CGNE_CAP, FD_DEFAULT_N, FD_GMRES_CAP, FD_TOL};
pub use fem::{fem_solve, run_fem_experiment, FemPreconditioner, Wind, FEM_DEFAULT_NUS, FEM_TOL};
pub use golden::{
    builtin_golden, compare, ComparisonReport, GoldenCell, GoldenRow, GoldenTable, Slack, Verdict,
    BUILTIN_GOLDEN_NAMES,
};
pub use history::{
    history_file_name, run_history, run_history_case, HISTORY_CAP, HISTORY_MESHES, HISTORY_NUS,
    HISTORY_TOL,
};
pub use table::{Cell, Metadata, TableResult, TableRow};

/// Every named experiment the command-line driver can run.
pub const EXPERIMENT_NAMES: &[&str] = &[
    "factor-sweep",
    "fd-upwind",
    "fd-centered",
    "l2-aniso",
    "rd-direct",
    "rd-projected",
    "rd-gmg",
    "history",
];
