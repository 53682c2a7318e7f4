//! Tabular reports with a fixed column set per command.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub const SCHEMA: &str = "rydgate-report/1";

const TERM_COLUMNS: [&str; 11] =
    ["se_c_1", "se_c_2", "se_t_1", "se_t_2", "se_c", "se_t", "r_c_1", "r_c_2", "r_t_1", "r_t_2", "r_t"];

pub fn budget_columns() -> Vec<&'static str> {
    let mut c = vec!["label", "scheme", "mode", "k", "omega_mhz", "omega_t_mhz", "duration_us", "total"];
    c.extend(TERM_COLUMNS);
    c.extend(["optimized", "converged", "evaluations", "omega_opt_mhz", "e_opt", "diagnostics", "warnings"]);
    c
}

pub fn sweep_columns() -> Vec<&'static str> {
    let mut c = vec!["label", "scheme", "mode", "k", "row", "omega_mhz", "total"];
    c.extend(TERM_COLUMNS);
    c
}

pub const OPTIMIZE_COLUMNS: [&str; 12] = [
    "label",
    "scheme",
    "mode",
    "k",
    "omega_mhz",
    "omega_t_mhz",
    "min_error",
    "omega_opt_mhz",
    "argmin_over_analytic",
    "evaluations",
    "converged",
    "duration_us",
];

pub const LATTICE_COLUMNS: [&str; 9] = ["label", "k", "atom", "role", "x", "y", "x_um", "y_um", "r_um"];

pub const SIMULATE_COLUMNS: [&str; 5] = ["input", "output", "population", "ideal", "input_error"];

pub fn columns_for(command: &str) -> Option<Vec<&'static str>> {
    Some(match command {
        "budget" => budget_columns(),
        "sweep-omega" => sweep_columns(),
        "optimize" => OPTIMIZE_COLUMNS.to_vec(),
        "lattice" => LATTICE_COLUMNS.to_vec(),
        "simulate" => SIMULATE_COLUMNS.to_vec(),
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealCheck {
    pub passed: bool,
    pub max_off_target: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub scheme: String,
    pub k: u32,
    pub avg_error: f64,
    pub mean_norm_deficit: f64,
    pub per_input_error: Vec<f64>,
    /// `truth_table[input][output]`, bit `a` of an index is atom `a`.
    pub truth_table: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal_check: Option<IdealCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationSummary>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let columns = columns_for(command).expect("known command").into_iter().map(String::from).collect();
        Self { schema: SCHEMA.into(), command: command.into(), columns, rows: Vec::new(), simulation: None }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    /// Checks the schema tag, the column set and every row.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema != SCHEMA {
            return Err(CliError::Report(format!("unknown schema {:?}", self.schema)));
        }
        let expected =
            columns_for(&self.command).ok_or_else(|| CliError::Report(format!("unknown command {:?}", self.command)))?;
        if self.columns != expected {
            return Err(CliError::Report("column set does not match the command".into()));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.columns.len() {
                return Err(CliError::Report(format!("row {i} has {} cells", row.len())));
            }
            if row.iter().any(|v| v.is_array() || v.is_object()) {
                return Err(CliError::Report(format!("row {i} has a nested cell")));
            }
        }
        if self.command == "simulate" && self.simulation.is_none() {
            return Err(CliError::Report("simulate report without summary".into()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let report: Self = serde_json::from_str(text).map_err(|e| CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        report.validate()?;
        Ok(report)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(cell))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

pub fn opt(x: Option<f64>) -> Value {
    x.map(num).unwrap_or(Value::Null)
}
