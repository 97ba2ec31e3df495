//! Provenance headers and rendering of result rows as text, JSON or CSV.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(betadim::Error),
    Io(String),
}

impl CliError {
    /// 2 usage, 3 domain, 4 precision or depth, 5 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Lib(betadim::Error::Domain(_)) => 3,
            CliError::Lib(betadim::Error::Precision(_) | betadim::Error::Depth(_) | betadim::Error::Convergence(_)) => 4,
            CliError::Lib(betadim::Error::Spec(_)) | CliError::Io(_) => 5,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<betadim::Error> for CliError {
    fn from(e: betadim::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Settings that produced a run, keyed in sorted order.
#[derive(Debug, Clone, Default, Serialize)]
#[serde(transparent)]
pub struct Provenance(Map<String, Value>);

impl Provenance {
    pub fn new(command: &str) -> Self {
        let mut p = Provenance::default();
        p.set("tool", "betadim");
        p.set("version", env!("CARGO_PKG_VERSION"));
        p.set("command", command);
        p
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.0.insert(key.to_string(), serde_json::to_value(value).expect("serializable setting"));
    }

    fn lines(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.0 {
            let v = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("# {k}={v}\n"));
        }
        out
    }
}

/// What a command prints.
pub struct Rendered {
    pub stdout: String,
    pub stderr: String,
}

/// Flat rows as a delimited table with a header.
pub fn table<R: Serialize>(rows: &[R], delimiter: u8) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().delimiter(delimiter).from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Renders in `format`; text uses `text` for stdout and sends provenance to stderr.
pub fn render<R: Serialize>(
    format: Format,
    provenance: &Provenance,
    summary: Option<Value>,
    rows: &[R],
    text: impl FnOnce() -> Result<String, CliError>,
) -> Result<Rendered, CliError> {
    match format {
        Format::Text => {
            let mut stdout = text()?;
            if !stdout.ends_with('\n') {
                stdout.push('\n');
            }
            Ok(Rendered { stdout, stderr: provenance.lines() })
        }
        Format::Json => {
            let mut obj = Map::new();
            obj.insert("provenance".into(), serde_json::to_value(provenance)?);
            if let Some(s) = summary {
                obj.insert("summary".into(), s);
            }
            obj.insert("rows".into(), serde_json::to_value(rows)?);
            let mut stdout = serde_json::to_string_pretty(&Value::Object(obj))?;
            stdout.push('\n');
            Ok(Rendered { stdout, stderr: String::new() })
        }
        Format::Csv => {
            let mut stdout = provenance.lines();
            if let Some(Value::Object(s)) = summary {
                for (k, v) in s {
                    stdout.push_str(&format!("# summary.{k}={v}\n"));
                }
            }
            stdout.push_str(&table(rows, b',')?);
            Ok(Rendered { stdout, stderr: String::new() })
        }
    }
}
