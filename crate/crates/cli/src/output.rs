//! Tabular data files (CSV or JSON) and their run manifests.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub const DATA_SCHEMA: &str = "catoverlap.data/1";
pub const MANIFEST_SCHEMA: &str = "catoverlap.manifest/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// CSV with a header row, LF line endings and 17 significant digits.
    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.into_inner().map_err(|e| CliError::Failure(e.to_string()))
    }

    pub fn to_json(&self, command: &str, meta: &BTreeMap<String, Value>) -> Result<Vec<u8>, CliError> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        let doc = serde_json::json!({
            "schema_version": DATA_SCHEMA,
            "command": command,
            "columns": self.columns,
            "rows": rows,
            "meta": meta,
        });
        let mut bytes = serde_json::to_vec_pretty(&doc)?;
        bytes.push(b'\n');
        Ok(bytes)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: String,
    pub command: String,
    /// Arguments after the program name, as given.
    pub argv: Vec<String>,
    pub parameters: BTreeMap<String, String>,
    pub tool_version: String,
    pub normalization_mode: String,
    pub warnings: Vec<String>,
    pub summary: BTreeMap<String, Value>,
    pub data_file: String,
    pub format: String,
    pub generated_at_unix: u64,
}

/// Everything a command produces before it is written out.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub table: Table,
    pub parameters: BTreeMap<String, String>,
    pub normalization_mode: String,
    pub warnings: Vec<String>,
    pub summary: BTreeMap<String, Value>,
}

impl CommandOutput {
    pub fn new(table: Table) -> Self {
        Self {
            table,
            parameters: BTreeMap::new(),
            normalization_mode: "n/a".into(),
            warnings: Vec::new(),
            summary: BTreeMap::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn summarize(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.summary
            .insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }
}

pub fn manifest_path(data: &Path) -> PathBuf {
    let mut name = data.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    data.with_file_name(name)
}

/// Writes the data file and, when it goes to a file, its manifest alongside.
pub fn emit(
    command: &str,
    argv: &[String],
    out: Option<&Path>,
    format: Format,
    output: &CommandOutput,
) -> Result<(), CliError> {
    let mut meta = output.summary.clone();
    meta.insert("parameters".into(), serde_json::to_value(&output.parameters)?);
    let bytes = match format {
        Format::Csv => output.table.to_csv()?,
        Format::Json => output.table.to_json(command, &meta)?,
    };
    for w in &output.warnings {
        eprintln!("warning: {w}");
    }
    let Some(path) = out else {
        std::io::stdout().write_all(&bytes)?;
        return Ok(());
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, &bytes)?;
    let manifest = RunManifest {
        schema_version: MANIFEST_SCHEMA.into(),
        command: command.into(),
        argv: argv.to_vec(),
        parameters: output.parameters.clone(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        normalization_mode: output.normalization_mode.clone(),
        warnings: output.warnings.clone(),
        summary: output.summary.clone(),
        data_file: path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
        format: format.as_str().into(),
        generated_at_unix: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
    };
    let mut text = serde_json::to_vec_pretty(&manifest)?;
    text.push(b'\n');
    fs::write(manifest_path(path), text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_rendering_is_fixed_width_scientific() {
        let mut t = Table::new(vec!["a", "b", "c"]);
        t.push(vec![Cell::Num(0.1), Cell::Int(7), Cell::Empty]);
        t.push(vec![Cell::Num(-2.5e-20), Cell::Num(1.0), Cell::Int(0)]);
        let s = String::from_utf8(t.to_csv().unwrap()).unwrap();
        assert_eq!(
            s,
            "a,b,c\n1.0000000000000001e-1,7,\n-2.4999999999999999e-20,1.0000000000000000e0,0\n"
        );
    }

    #[test]
    fn csv_values_round_trip() {
        for v in [0.1, 1.0 / 3.0, std::f64::consts::PI, 1e-300, -123456.789] {
            let s = Cell::Num(v).csv();
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn manifest_path_sits_next_to_data() {
        assert_eq!(manifest_path(Path::new("out/scan.csv")), PathBuf::from("out/scan.csv.manifest.json"));
    }
}
