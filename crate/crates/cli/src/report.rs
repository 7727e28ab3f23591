use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use lmsr_core::LedgerSnapshot;
use serde_json::{json, Map, Value};

use crate::args::OutputArgs;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl From<lmsr_core::Error> for CliError {
    fn from(e: lmsr_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Rows with a fixed header.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> CliResult<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.header).map_err(|e| CliError::Io(e.to_string()))?;
        for row in &self.rows {
            writer.write_record(row).map_err(|e| CliError::Io(e.to_string()))?;
        }
        let bytes = writer.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }
}

/// A command's result in all output formats.
pub struct Report {
    pub json: Value,
    /// Plain-text rendering; tables print as CSV when this is `None`.
    pub plain: Option<String>,
    pub table: Table,
}

impl Report {
    pub fn emit(&self, output: &OutputArgs) -> CliResult<()> {
        if let Some(path) = &output.csv {
            write_file(path, &self.table.to_csv()?)?;
        }
        let text = if output.json {
            canonical(&self.json) + "\n"
        } else if let Some(plain) = &self.plain {
            plain.clone()
        } else {
            self.table.to_csv()?
        };
        let mut stdout = io::stdout().lock();
        match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
            // a closed reader (`| head`) is not a failure
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::Io(e.to_string())),
            _ => Ok(()),
        }
    }
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Pretty JSON with sorted keys; parsing and re-serializing reproduces it.
pub fn canonical(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values always serialize")
}

pub fn charges_json(snapshot: &LedgerSnapshot) -> Value {
    serde_json::to_value(snapshot).expect("snapshot serializes")
}

pub fn charges_plain(snapshot: &LedgerSnapshot) -> String {
    let mut out = String::from("charges:\n");
    for (name, value) in LedgerSnapshot::COLUMNS.iter().zip(snapshot.values()) {
        out.push_str(&format!("  {name:<9} {}\n", fmt_float(value)));
    }
    out
}

/// Shortest round-tripping decimal.
pub fn fmt_float(x: f64) -> String {
    format!("{x}")
}

/// JSON object from key/value pairs.
pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}

pub fn null_charges() -> Value {
    json!(null)
}
