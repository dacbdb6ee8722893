//! Command-line driver for the experiment harness.
//!
//! `normalkit run <experiment>` executes one of the named iteration-count
//! studies, `normalkit compare` checks a saved result against a reference
//! table, and `normalkit export-mm` writes an assembled system in Matrix
//! Market form.  Exit codes: 0 success, 1 a solve failed, 2 a comparison
//! failed, 3 bad configuration.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use normalkit::fd1d::{advection_factor, assemble_centered, assemble_upwind, Problem1d};
use normalkit::fem2d::{
    assemble_advdiff, assemble_anisotropic, assemble_mass, assemble_reaction_diffusion,
    assemble_stiffness, StructuredMesh,
};
use normalkit::matkit::{write_matrix_market, CsrMatrix, MatError};
use normalkit::xprmt::{
    builtin_golden, compare, run_factor_sweep, run_fd_sweep, run_fem_experiment, run_history,
    FdScheme, FemPreconditioner, GoldenTable, SweepPoint, TableResult, Wind, BUILTIN_GOLDEN_NAMES,
    EXPERIMENT_NAMES, FACTOR_SWEEP_SIZES, FD_DEFAULT_N, FD_TOL, FEM_DEFAULT_NUS, HISTORY_MESHES,
    HISTORY_NUS,
};

const EXIT_SOLVER: u8 = 1;
const EXIT_COMPARE: u8 = 2;
const EXIT_CONFIG: u8 = 3;

#[derive(Parser)]
#[command(name = "normalkit", version, about = "Normal-equation preconditioning experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named experiment and print its iteration-count table
    Run(RunArgs),
    /// Check a saved result table against a reference table
    Compare(CompareArgs),
    /// Write an assembled system in Matrix Market coordinate form
    ExportMm(ExportArgs),
}

#[derive(Args)]
struct RunArgs {
    /// One of: factor-sweep, fd-upwind, fd-centered, l2-aniso, rd-direct,
    /// rd-projected, rd-gmg, history
    experiment: String,
    /// Directory for the table as JSON and CSV, or for history traces
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Write a JSON-lines log with one record per solve
    #[arg(long, value_name = "FILE")]
    log: Option<PathBuf>,
    /// Compare the result against the bundled reference table
    #[arg(long)]
    check: bool,
    /// Add the 512-cell mesh to the 2D sweeps
    #[arg(long = "include-512")]
    include_512: bool,
    /// Mesh sizes in cells per side for the 2D experiments
    #[arg(long = "mesh", value_name = "CELLS")]
    meshes: Vec<usize>,
    /// Diffusion coefficients to sweep
    #[arg(long = "nu", value_name = "NU")]
    nus: Vec<f64>,
    /// Wind direction for the 2D experiments
    #[arg(long, value_enum)]
    wind: Option<WindArg>,
    /// Interior unknowns for the 1D sweeps
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct CompareArgs {
    /// Result table JSON written by `run --out`
    result: PathBuf,
    /// Reference table: a JSON file path or a bundled experiment name
    golden: String,
}

#[derive(Args)]
struct ExportArgs {
    /// System to assemble
    #[arg(value_enum)]
    system: SystemArg,
    /// Interior unknowns for the 1D systems
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Diffusion coefficient
    #[arg(long, default_value_t = 1e-2)]
    nu: f64,
    /// Wind speed for the 1D systems
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Cells per side for the 2D systems
    #[arg(long, default_value_t = 32)]
    mesh: usize,
    /// Wind direction for the 2D systems
    #[arg(long, value_enum, default_value_t = WindArg::X)]
    wind: WindArg,
    /// Output file (stdout when omitted)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WindArg {
    X,
    Diag,
}

impl From<WindArg> for Wind {
    fn from(w: WindArg) -> Wind {
        match w {
            WindArg::X => Wind::X,
            WindArg::Diag => Wind::Diagonal,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemArg {
    /// 1D convection-diffusion, upwind differences
    FdUpwind,
    /// 1D convection-diffusion, centered differences
    FdCentered,
    /// 1D upwinded advection factor
    FdFactor,
    /// 2D stabilized advection-diffusion stiffness matrix
    FemAdvdiff,
    /// 2D mass matrix on interior nodes
    FemMass,
    /// 2D Laplace stiffness matrix on interior nodes
    FemStiffness,
    /// 2D reaction-diffusion preconditioner matrix
    FemReactionDiffusion,
    /// 2D wind-aligned anisotropic stiffness matrix
    FemAnisotropic,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Compare(args) => cmd_compare(&args),
        Command::ExportMm(args) => cmd_export_mm(&args),
    };
    ExitCode::from(code)
}

fn cmd_run(args: &RunArgs) -> u8 {
    let name = args.experiment.as_str();
    if !EXPERIMENT_NAMES.contains(&name) {
        eprintln!("unknown experiment {name:?}; available: {}", EXPERIMENT_NAMES.join(", "));
        return EXIT_CONFIG;
    }
    if let Err(msg) = validate_run_flags(args, name) {
        eprintln!("{msg}");
        return EXIT_CONFIG;
    }
    if name == "history" {
        return cmd_run_history(args);
    }
    let table = match build_table(args, name) {
        Ok(table) => table,
        Err(err) => {
            eprintln!("{name}: {err}");
            return EXIT_CONFIG;
        }
    };
    print!("{}", table.render());
    if let Err(err) = write_table_outputs(&table, args) {
        eprintln!("{err}");
        return EXIT_SOLVER;
    }
    if args.check {
        let text = builtin_golden(name).expect("bundled reference exists for checked experiments");
        let golden = GoldenTable::from_json(text).expect("bundled reference parses");
        return match compare(&table, &golden) {
            Ok(report) => {
                print!("{}", report.render());
                if report.pass {
                    0
                } else {
                    EXIT_COMPARE
                }
            }
            Err(err) => {
                eprintln!("{err}");
                EXIT_CONFIG
            }
        };
    }
    let failed = table.rows.iter().flat_map(|r| &r.cells).any(|c| c.is_dash());
    if failed {
        eprintln!("{name}: a solve hit its iteration budget without converging");
        EXIT_SOLVER
    } else {
        0
    }
}

fn validate_run_flags(args: &RunArgs, name: &str) -> Result<(), String> {
    let is_fd = matches!(name, "fd-upwind" | "fd-centered");
    let is_2d = matches!(name, "l2-aniso" | "rd-direct" | "rd-projected" | "rd-gmg" | "history");
    if args.n.is_some() && !is_fd {
        return Err("--n applies to the 1D sweeps".to_string());
    }
    if (!args.meshes.is_empty() || args.wind.is_some() || args.include_512) && !is_2d {
        return Err("--mesh, --wind and --include-512 apply to the 2D experiments".to_string());
    }
    if !args.nus.is_empty() && name == "factor-sweep" {
        return Err("factor-sweep sweeps matrix sizes, not diffusion coefficients".to_string());
    }
    if args.check {
        if name == "history" {
            return Err("history produces traces, not a table; nothing to check".to_string());
        }
        if !BUILTIN_GOLDEN_NAMES.contains(&name) {
            return Err(format!("no bundled reference table for {name}"));
        }
        let overridden = args.n.is_some()
            || !args.meshes.is_empty()
            || !args.nus.is_empty()
            || args.wind.is_some()
            || args.include_512;
        if overridden {
            return Err(
                "--check compares against the bundled reference, which records the default \
                 configuration; drop the overrides or use `compare` with your own reference"
                    .to_string(),
            );
        }
    }
    if name == "history" && args.log.is_some() {
        return Err("history writes per-run traces; --log applies to the table experiments"
            .to_string());
    }
    Ok(())
}

fn build_table(args: &RunArgs, name: &str) -> Result<TableResult, MatError> {
    match name {
        "factor-sweep" => run_factor_sweep(FACTOR_SWEEP_SIZES),
        "fd-upwind" | "fd-centered" => {
            let scheme =
                if name == "fd-upwind" { FdScheme::Upwind } else { FdScheme::Centered };
            let n = args.n.unwrap_or(FD_DEFAULT_N);
            if args.nus.is_empty() && n == FD_DEFAULT_N {
                run_fd_sweep(scheme, n, scheme.reference_rows())
            } else {
                let nus: Vec<f64> = if args.nus.is_empty() {
                    scheme.reference_rows().iter().map(|p| p.nu).collect()
                } else {
                    args.nus.clone()
                };
                let points: Vec<SweepPoint> =
                    nus.iter().map(|&nu| SweepPoint::uniform(nu, FD_TOL)).collect();
                run_fd_sweep(scheme, n, &points)
            }
        }
        _ => {
            let kind = match name {
                "l2-aniso" => FemPreconditioner::L2Aniso,
                "rd-direct" => FemPreconditioner::RdDirect,
                "rd-projected" => FemPreconditioner::RdProjected,
                _ => FemPreconditioner::RdGmg,
            };
            let wind = args.wind.map(Wind::from).unwrap_or_else(|| kind.default_wind());
            let mut meshes: Vec<usize> = if args.meshes.is_empty() {
                kind.default_meshes().to_vec()
            } else {
                args.meshes.clone()
            };
            if args.include_512 && !meshes.contains(&512) {
                meshes.push(512);
            }
            let nus: Vec<f64> =
                if args.nus.is_empty() { FEM_DEFAULT_NUS.to_vec() } else { args.nus.clone() };
            run_fem_experiment(kind, wind, &meshes, &nus)
        }
    }
}

fn write_table_outputs(table: &TableResult, args: &RunArgs) -> Result<(), String> {
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
        let json = dir.join(format!("{}.json", table.experiment));
        fs::write(&json, table.to_json())
            .map_err(|e| format!("cannot write {}: {e}", json.display()))?;
        let csv = dir.join(format!("{}.csv", table.experiment));
        fs::write(&csv, table.to_csv())
            .map_err(|e| format!("cannot write {}: {e}", csv.display()))?;
        println!("wrote {}", json.display());
        println!("wrote {}", csv.display());
    }
    if let Some(log) = &args.log {
        fs::write(log, table.run_log())
            .map_err(|e| format!("cannot write {}: {e}", log.display()))?;
        println!("wrote {}", log.display());
    }
    Ok(())
}

fn cmd_run_history(args: &RunArgs) -> u8 {
    let wind = args.wind.map(Wind::from).unwrap_or(Wind::Diagonal);
    let mut meshes: Vec<usize> =
        if args.meshes.is_empty() { HISTORY_MESHES.to_vec() } else { args.meshes.clone() };
    if args.include_512 && !meshes.contains(&512) {
        meshes.push(512);
    }
    let nus: Vec<f64> = if args.nus.is_empty() { HISTORY_NUS.to_vec() } else { args.nus.clone() };
    let dir = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
    if let Err(err) = fs::create_dir_all(&dir) {
        eprintln!("cannot create {}: {err}", dir.display());
        return EXIT_CONFIG;
    }
    match run_history(&dir, wind, &meshes, &nus) {
        Ok(written) => {
            let mut failed = false;
            for (path, report) in &written {
                println!(
                    "{}  iterations={} converged={}",
                    path.display(),
                    report.iterations,
                    report.converged
                );
                failed |= !report.converged;
            }
            if failed {
                eprintln!("at least one history run did not converge");
                EXIT_SOLVER
            } else {
                0
            }
        }
        Err(err) => {
            eprintln!("history: {err}");
            EXIT_CONFIG
        }
    }
}

fn cmd_compare(args: &CompareArgs) -> u8 {
    let text = match fs::read_to_string(&args.result) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("cannot read {}: {err}", args.result.display());
            return EXIT_CONFIG;
        }
    };
    let result = match TableResult::from_json(&text) {
        Ok(result) => result,
        Err(err) => {
            eprintln!("{} is not a result table: {err}", args.result.display());
            return EXIT_CONFIG;
        }
    };
    let golden = if Path::new(&args.golden).is_file() {
        let text = match fs::read_to_string(&args.golden) {
            Ok(text) => text,
            Err(err) => {
                eprintln!("cannot read {}: {err}", args.golden);
                return EXIT_CONFIG;
            }
        };
        match GoldenTable::from_json(&text) {
            Ok(golden) => golden,
            Err(err) => {
                eprintln!("{} is not a reference table: {err}", args.golden);
                return EXIT_CONFIG;
            }
        }
    } else if let Some(text) = builtin_golden(&args.golden) {
        GoldenTable::from_json(text).expect("bundled reference parses")
    } else {
        eprintln!(
            "{:?} is neither a reference file nor a bundled table name (bundled: {})",
            args.golden,
            BUILTIN_GOLDEN_NAMES.join(", ")
        );
        return EXIT_CONFIG;
    };
    match compare(&result, &golden) {
        Ok(report) => {
            print!("{}", report.render());
            if report.pass {
                0
            } else {
                EXIT_COMPARE
            }
        }
        Err(err) => {
            eprintln!("{err}");
            EXIT_CONFIG
        }
    }
}

fn cmd_export_mm(args: &ExportArgs) -> u8 {
    let matrix = match build_system(args) {
        Ok(matrix) => matrix,
        Err(err) => {
            eprintln!("{err}");
            return EXIT_CONFIG;
        }
    };
    let mut buffer: Vec<u8> = Vec::new();
    if let Err(err) = write_matrix_market(&matrix, &mut buffer) {
        eprintln!("{err}");
        return EXIT_SOLVER;
    }
    match &args.out {
        Some(path) => {
            if let Err(err) = fs::write(path, &buffer) {
                eprintln!("cannot write {}: {err}", path.display());
                return EXIT_SOLVER;
            }
            println!("wrote {} ({} rows, {} entries)", path.display(), matrix.rows(), matrix.nnz());
        }
        None => {
            if std::io::stdout().write_all(&buffer).is_err() {
                return EXIT_SOLVER;
            }
        }
    }
    0
}

fn build_system(args: &ExportArgs) -> Result<CsrMatrix, MatError> {
    let one_d = |args: &ExportArgs| -> Result<Problem1d, MatError> {
        if args.n == 0 {
            return Err(MatError::Invalid("--n must be at least 1".to_string()));
        }
        if !(args.nu > 0.0 && args.nu.is_finite()) {
            return Err(MatError::Invalid("--nu must be positive".to_string()));
        }
        Ok(Problem1d { n: args.n, nu: args.nu, beta: args.beta, left: 0.0, right: 1.0 })
    };
    match args.system {
        SystemArg::FdUpwind => Ok(assemble_upwind(&one_d(args)?, &|_| 1.0).0.to_csr()),
        SystemArg::FdCentered => Ok(assemble_centered(&one_d(args)?, &|_| 1.0).0.to_csr()),
        SystemArg::FdFactor => Ok(advection_factor(&one_d(args)?)?.to_csr()),
        SystemArg::FemAdvdiff => {
            let mesh = StructuredMesh::new(args.mesh)?;
            let problem = Wind::from(args.wind).problem(args.nu);
            Ok(assemble_advdiff(&mesh, &problem, &|_, _| 1.0).0)
        }
        SystemArg::FemMass => Ok(assemble_mass(&StructuredMesh::new(args.mesh)?)),
        SystemArg::FemStiffness => Ok(assemble_stiffness(&StructuredMesh::new(args.mesh)?)),
        SystemArg::FemReactionDiffusion => {
            let mesh = StructuredMesh::new(args.mesh)?;
            let beta = Wind::from(args.wind).problem(args.nu).beta;
            assemble_reaction_diffusion(&mesh, args.nu, beta)
        }
        SystemArg::FemAnisotropic => {
            let mesh = StructuredMesh::new(args.mesh)?;
            let beta = Wind::from(args.wind).problem(args.nu).beta;
            Ok(assemble_anisotropic(&mesh, beta))
        }
    }
}
