use serde::{Deserialize, Serialize};

use super::table::TableResult;
use crate::matkit::MatError;

/// Tolerance on an iteration count: the allowed deviation is the larger of
/// the absolute slack and the relative slack times the reference count.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Slack {
    #[serde(default)]
    pub abs: usize,
    #[serde(default)]
    pub rel: f64,
}

impl Slack {
    pub fn allowed(&self, count: usize) -> usize {
        self.abs.max((self.rel * count as f64).round() as usize)
    }
}

/// Expectation for one cell. An empty cell only requires convergence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GoldenCell {
    /// Reference iteration count, checked within slack.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    /// The solver is expected to hit its budget without converging.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub dash: bool,
    /// The count must converge and strictly exceed this floor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exceeds: Option<usize>,
    /// Overrides the table-level slack for this cell.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack: Option<Slack>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenRow {
    pub param: String,
    pub cells: Vec<GoldenCell>,
}

/// Reference table with comparison rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenTable {
    pub experiment: String,
    pub col_labels: Vec<String>,
    #[serde(default)]
    pub slack: Slack,
    /// Bound on max minus min count within each row, when counts are
    /// expected to be mesh independent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_spread_max: Option<usize>,
    /// Ceiling that every converged count must stay under.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_count: Option<usize>,
    pub rows: Vec<GoldenRow>,
}

impl GoldenTable {
    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Verdict for one checked constraint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub row: String,
    pub col: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub experiment: String,
    pub verdicts: Vec<Verdict>,
    pub pass: bool,
}

impl ComparisonReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for v in &self.verdicts {
            let mark = if v.pass { "ok  " } else { "FAIL" };
            out.push_str(&format!(
                "{mark}  {} / {}: expected {}, observed {}\n",
                v.row, v.col, v.expected, v.observed
            ));
        }
        let overall = if self.pass { "PASS" } else { "FAIL" };
        out.push_str(&format!("{}: {overall}\n", self.experiment));
        out
    }
}

/// Check an observed table against a reference, cell by cell.
///
/// Dashes must match exactly in both directions. Counts must lie within
/// the cell's slack (falling back to the table slack). Floors, ceilings,
/// and per-row spread bounds are checked where the reference declares them.
pub fn compare(result: &TableResult, golden: &GoldenTable) -> Result<ComparisonReport, MatError> {
    if result.col_labels != golden.col_labels {
        return Err(MatError::Invalid(format!(
            "column labels differ: result {:?} vs reference {:?}",
            result.col_labels, golden.col_labels
        )));
    }
    if result.rows.len() != golden.rows.len() {
        return Err(MatError::Invalid(format!(
            "row count differs: result has {}, reference has {}",
            result.rows.len(),
            golden.rows.len()
        )));
    }
    let mut verdicts = Vec::new();
    for (row, gold_row) in result.rows.iter().zip(&golden.rows) {
        if row.param != gold_row.param {
            return Err(MatError::Invalid(format!(
                "row parameter differs: result {} vs reference {}",
                row.param, gold_row.param
            )));
        }
        if row.cells.len() != gold_row.cells.len() {
            return Err(MatError::Invalid(format!(
                "row {} width differs: result has {}, reference has {}",
                row.param,
                row.cells.len(),
                gold_row.cells.len()
            )));
        }
        for ((cell, gold), col) in row.cells.iter().zip(&gold_row.cells).zip(&golden.col_labels) {
            let observed = cell.display_count();
            let mut expected_parts = Vec::new();
            let mut pass = true;
            if gold.dash {
                expected_parts.push("-".to_string());
                pass &= cell.is_dash();
            } else {
                if cell.is_dash() {
                    pass = false;
                }
                if let Some(count) = gold.count {
                    let allowed = gold.slack.unwrap_or(golden.slack).allowed(count);
                    expected_parts.push(format!("{count} ±{allowed}"));
                    pass &= !cell.is_dash() && cell.iterations.abs_diff(count) <= allowed;
                }
                if let Some(floor) = gold.exceeds {
                    expected_parts.push(format!("> {floor}"));
                    pass &= !cell.is_dash() && cell.iterations > floor;
                }
                if let Some(ceiling) = golden.max_count {
                    expected_parts.push(format!("<= {ceiling}"));
                    pass &= !cell.is_dash() && cell.iterations <= ceiling;
                }
                if expected_parts.is_empty() {
                    expected_parts.push("converged".to_string());
                }
            }
            verdicts.push(Verdict {
                row: row.param.clone(),
                col: col.clone(),
                expected: expected_parts.join(", "),
                observed,
                pass,
            });
        }
        if let Some(bound) = golden.row_spread_max {
            let expect_all_converged = gold_row.cells.iter().all(|g| !g.dash);
            if expect_all_converged {
                let counts: Vec<usize> = row
                    .cells
                    .iter()
                    .filter(|c| !c.is_dash())
                    .map(|c| c.iterations)
                    .collect();
                let (pass, observed) = if counts.len() == row.cells.len() {
                    let spread = counts.iter().max().unwrap() - counts.iter().min().unwrap();
                    (spread <= bound, spread.to_string())
                } else {
                    (false, "unconverged cells".to_string())
                };
                verdicts.push(Verdict {
                    row: row.param.clone(),
                    col: "spread".to_string(),
                    expected: format!("<= {bound}"),
                    observed,
                    pass,
                });
            }
        }
    }
    let pass = verdicts.iter().all(|v| v.pass);
    Ok(ComparisonReport { experiment: result.experiment.clone(), verdicts, pass })
}

/// Reference tables bundled with the crate, keyed by experiment name.
pub fn builtin_golden(name: &str) -> Option<&'static str> {
    macro_rules! golden_file {
        ($name:literal) => {
            include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/golden/", $name, ".json"))
        };
    }
    match name {
        "factor-sweep" => Some(golden_file!("factor-sweep")),
        "fd-upwind" => Some(golden_file!("fd-upwind")),
        "fd-centered" => Some(golden_file!("fd-centered")),
        "l2-aniso" => Some(golden_file!("l2-aniso")),
        "rd-projected" => Some(golden_file!("rd-projected")),
        "rd-gmg" => Some(golden_file!("rd-gmg")),
        _ => None,
    }
}

pub const BUILTIN_GOLDEN_NAMES: &[&str] =
    &["factor-sweep", "fd-upwind", "fd-centered", "l2-aniso", "rd-projected", "rd-gmg"];
