//! Run reports and their CSV / JSON serializations.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{Map, Number, Value as Json};

use crate::config::{ExperimentConfig, Format};

/// One cell of a result row.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(i64),
    Real(f64),
    Text(String),
    Bool(bool),
    /// Not applicable for this row.
    Missing,
}

impl Value {
    /// CSV text: reals with 17 significant digits, so they round-trip.
    fn csv(&self) -> String {
        match self {
            Self::Int(i) => i.to_string(),
            Self::Real(x) if x.is_finite() => format!("{x:.16e}"),
            Self::Real(x) => x.to_string(),
            Self::Text(s) => s.clone(),
            Self::Bool(b) => b.to_string(),
            Self::Missing => String::new(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Self::Int(i) => Json::from(*i),
            Self::Real(x) => Number::from_f64(*x).map(Json::Number).unwrap_or(Json::Null),
            Self::Text(s) => Json::from(s.clone()),
            Self::Bool(b) => Json::from(*b),
            Self::Missing => Json::Null,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Self::Int(i) => Some(*i as f64),
            Self::Real(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Self::Text(s) => Some(s),
            _ => None,
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Self::Real(x)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Self::Int(x as i64)
    }
}

impl From<bool> for Value {
    fn from(x: bool) -> Self {
        Self::Bool(x)
    }
}

impl From<&str> for Value {
    fn from(x: &str) -> Self {
        Self::Text(x.to_string())
    }
}

impl From<String> for Value {
    fn from(x: String) -> Self {
        Self::Text(x)
    }
}

/// Column-labelled rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the header"
        );
        self.rows.push(row);
    }

    fn index(&self, column: &str) -> usize {
        self.columns
            .iter()
            .position(|c| *c == column)
            .unwrap_or_else(|| panic!("no column '{column}'"))
    }

    /// Cells of one column.
    pub fn column(&self, column: &str) -> Vec<&Value> {
        let i = self.index(column);
        self.rows.iter().map(|r| &r[i]).collect()
    }

    /// Numeric cells of one column; non-numeric cells become NaN.
    pub fn reals(&self, column: &str) -> Vec<f64> {
        self.column(column)
            .into_iter()
            .map(|v| v.as_f64().unwrap_or(f64::NAN))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub experiment: String,
    pub artifact_version: String,
    pub seed: u64,
    pub threads: usize,
    /// Resolved parameters, defaults included.
    pub config: BTreeMap<String, String>,
    pub table: Table,
    pub checks: Vec<Check>,
    /// Measured by the caller; not serialized so that outputs stay
    /// byte-identical across runs.
    pub wall_clock_seconds: f64,
}

impl RunReport {
    pub fn new(config: &ExperimentConfig, table: Table, checks: Vec<Check>) -> Self {
        Self {
            experiment: config.experiment.name().to_string(),
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: config.seed,
            threads: config.threads,
            config: config.params().clone(),
            table,
            checks,
            wall_clock_seconds: 0.0,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Header plus one line per row, comma separated, LF endings.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer
            .write_record(&self.table.columns)
            .expect("in-memory write");
        for row in &self.table.rows {
            writer
                .write_record(row.iter().map(Value::csv))
                .expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }

    /// One report object with a `rows` array.
    pub fn to_json(&self) -> String {
        let rows: Vec<Json> = self
            .table
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Json> = self
                    .table
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                Json::Object(obj)
            })
            .collect();
        let mut report = Map::new();
        report.insert("experiment".into(), Json::from(self.experiment.clone()));
        report.insert(
            "artifact_version".into(),
            Json::from(self.artifact_version.clone()),
        );
        report.insert("seed".into(), Json::from(self.seed));
        report.insert("threads".into(), Json::from(self.threads));
        report.insert(
            "config".into(),
            serde_json::to_value(&self.config).expect("string map"),
        );
        report.insert("passed".into(), Json::from(self.passed()));
        report.insert(
            "checks".into(),
            serde_json::to_value(&self.checks).expect("plain struct"),
        );
        report.insert("columns".into(), Json::from(self.table.columns.clone()));
        report.insert("rows".into(), Json::Array(rows));
        let mut text = serde_json::to_string_pretty(&Json::Object(report)).expect("finite json");
        text.push('\n');
        text
    }
}
