use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::krylov::{SolveReport, Termination};

/// Outcome of a single solve inside an iteration-count table.
///
/// Wall time is deliberately not part of a cell so that serialized tables
/// are byte-identical across runs of the same build.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub iterations: usize,
    pub converged: bool,
    pub termination: String,
    pub final_residual: f64,
}

impl Cell {
    pub fn from_report(report: &SolveReport) -> Self {
        let termination = match &report.termination {
            Termination::ResidualTol => "residual_tol".to_string(),
            Termination::MaxIter => "max_iter".to_string(),
            Termination::Breakdown(msg) => format!("breakdown: {msg}"),
        };
        Cell {
            iterations: report.iterations,
            converged: report.converged,
            termination,
            final_residual: report.final_residual(),
        }
    }

    /// A cell that never reached the tolerance renders as a dash.
    pub fn is_dash(&self) -> bool {
        !self.converged
    }

    pub fn display_count(&self) -> String {
        if self.is_dash() {
            "-".to_string()
        } else {
            self.iterations.to_string()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    /// Row parameter value, e.g. a problem size or a diffusion coefficient.
    pub param: String,
    pub cells: Vec<Cell>,
}

/// Everything needed to rerun the experiment that produced a table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub solver: String,
    pub riesz: String,
    pub preconditioner: String,
    pub tol_abs: f64,
    pub max_iter: usize,
    pub version: String,
    pub config: BTreeMap<String, String>,
}

/// An iteration-count table: one row per parameter value, one column per
/// method or mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableResult {
    pub experiment: String,
    pub row_label: String,
    pub col_labels: Vec<String>,
    pub rows: Vec<TableRow>,
    pub metadata: Metadata,
}

impl TableResult {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table serialization");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// Plain-text rendering with aligned columns.
    pub fn render(&self) -> String {
        let mut header: Vec<String> = vec![self.row_label.clone()];
        header.extend(self.col_labels.iter().cloned());
        let mut lines: Vec<Vec<String>> = vec![header];
        for row in &self.rows {
            let mut line = vec![row.param.clone()];
            line.extend(row.cells.iter().map(Cell::display_count));
            lines.push(line);
        }
        let ncols = lines.iter().map(Vec::len).max().unwrap_or(0);
        let widths: Vec<usize> = (0..ncols)
            .map(|j| lines.iter().filter_map(|l| l.get(j)).map(String::len).max().unwrap_or(0))
            .collect();
        let mut out = format!("experiment: {}\n", self.experiment);
        for line in &lines {
            let mut rendered = String::new();
            for (j, field) in line.iter().enumerate() {
                if j > 0 {
                    rendered.push_str("  ");
                }
                let _ = write!(rendered, "{:>width$}", field, width = widths[j]);
            }
            out.push_str(rendered.trim_end());
            out.push('\n');
        }
        out
    }

    /// Iteration counts as a comma-separated grid, dashes for failures.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.row_label);
        for label in &self.col_labels {
            out.push(',');
            out.push_str(label);
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.param);
            for cell in &row.cells {
                out.push(',');
                out.push_str(&cell.display_count());
            }
            out.push('\n');
        }
        out
    }

    /// One JSON object per solve, each echoing the full configuration, so a
    /// log line is interpretable on its own.
    pub fn run_log(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            for (cell, col) in row.cells.iter().zip(&self.col_labels) {
                let record = serde_json::json!({
                    "experiment": self.experiment,
                    self.row_label.clone(): row.param,
                    "column": col,
                    "iterations": cell.iterations,
                    "converged": cell.converged,
                    "termination": cell.termination,
                    "final_residual": cell.final_residual,
                    "metadata": self.metadata,
                });
                out.push_str(&serde_json::to_string(&record).expect("log serialization"));
                out.push('\n');
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Duration;

    fn sample() -> TableResult {
        let report = SolveReport {
            solution: vec![1.0],
            iterations: 7,
            converged: true,
            termination: Termination::ResidualTol,
            residual_history: vec![1.0, 0.5, 1e-12],
            wall_time: Duration::from_millis(3),
        };
        let stalled = SolveReport {
            iterations: 1000,
            converged: false,
            termination: Termination::MaxIter,
            ..report.clone()
        };
        TableResult {
            experiment: "demo".into(),
            row_label: "n".into(),
            col_labels: vec!["fast".into(), "slow".into()],
            rows: vec![TableRow {
                param: "10".into(),
                cells: vec![Cell::from_report(&report), Cell::from_report(&stalled)],
            }],
            metadata: Metadata {
                solver: "cgne".into(),
                riesz: "identity".into(),
                preconditioner: "none".into(),
                tol_abs: 1e-10,
                max_iter: 1000,
                version: env!("CARGO_PKG_VERSION").into(),
                config: BTreeMap::from([("beta".to_string(), "1".to_string())]),
            },
        }
    }

    #[test]
    fn json_round_trip_preserves_the_table() {
        let table = sample();
        let back = TableResult::from_json(&table.to_json()).unwrap();
        assert_eq!(back, table);
    }

    #[test]
    fn unconverged_cells_render_as_dashes() {
        let table = sample();
        let text = table.render();
        assert!(text.contains('7'));
        assert!(text.contains('-'));
        assert_eq!(table.to_csv(), "n,fast,slow\n10,7,-\n");
    }

    #[test]
    fn run_log_emits_one_line_per_cell() {
        let table = sample();
        let log = table.run_log();
        assert_eq!(log.lines().count(), 2);
        for line in log.lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert_eq!(v["experiment"], "demo");
            assert_eq!(v["metadata"]["solver"], "cgne");
            assert!(v["n"].is_string());
        }
    }

    #[test]
    fn serialization_is_deterministic() {
        let table = sample();
        assert_eq!(table.to_json(), table.to_json());
        assert_eq!(table.run_log(), table.run_log());
    }
}
