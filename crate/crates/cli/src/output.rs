//! Tables written as CSV (with `#` comment lines) or JSON.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};
use tempfile::NamedTempFile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(usize),
    Num(f64),
    Text(String),
    Blank,
}

impl Cell {
    pub fn opt(value: Option<f64>) -> Cell {
        value.map_or(Cell::Blank, Cell::Num)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => format_number(*x),
            Cell::Text(s) => s.clone(),
            Cell::Blank => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            // non-finite values have no JSON number form; serde_json writes null
            Cell::Num(x) => json!(clean(*x)),
            Cell::Text(s) => json!(s),
            Cell::Blank => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// `-0.0` prints as `-0.00000000000e0`, which would make otherwise identical
/// runs differ in a sign nobody cares about.
fn clean(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

/// Scientific notation with 12 significant digits.
pub fn format_number(x: f64) -> String {
    format!("{:.11e}", clean(x))
}

#[derive(Debug, Default)]
pub struct Table {
    /// Tool version and the full parameter echo.
    pub meta: Vec<(String, Cell)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Derived scalars: solved couplings, metrics, fit results.
    pub summary: Vec<(String, Cell)>,
}

impl Table {
    pub fn new(command: &str, columns: Vec<&'static str>) -> Self {
        let meta = vec![
            ("tool".to_string(), Cell::from(env!("CARGO_BIN_NAME"))),
            ("version".to_string(), Cell::from(env!("CARGO_PKG_VERSION"))),
            ("command".to_string(), Cell::from(command)),
        ];
        Self { meta, columns, ..Self::default() }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Cell>) -> &mut Self {
        self.meta.push((key.to_string(), value.into()));
        self
    }

    pub fn summarize(&mut self, key: &str, value: impl Into<Cell>) -> &mut Self {
        self.summary.push((key.to_string(), value.into()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> std::io::Result<Vec<u8>> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => {
                let mut out = serde_json::to_vec_pretty(&self.to_json())?;
                out.push(b'\n');
                Ok(out)
            }
        }
    }

    fn to_csv(&self) -> std::io::Result<Vec<u8>> {
        let mut out = Vec::new();
        writeln!(out, "# {}", key_values(&self.meta))?;
        let mut writer = csv::Writer::from_writer(&mut out);
        writer.write_record(&self.columns)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(Cell::csv))?;
        }
        writer.flush()?;
        drop(writer);
        if !self.summary.is_empty() {
            writeln!(out, "# {}", key_values(&self.summary))?;
        }
        Ok(out)
    }

    fn to_json(&self) -> Value {
        let object = |pairs: &[(String, Cell)]| -> Value {
            Value::Object(pairs.iter().map(|(k, v)| (k.clone(), v.json())).collect::<Map<_, _>>())
        };
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        json!({
            "meta": object(&self.meta),
            "columns": self.columns,
            "rows": rows,
            "summary": object(&self.summary),
        })
    }
}

fn key_values(pairs: &[(String, Cell)]) -> String {
    pairs.iter().map(|(k, v)| format!("{k}={}", v.csv())).collect::<Vec<_>>().join(" ")
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// so readers never see a half-written file; `None` means stdout.
pub fn emit(bytes: &[u8], path: Option<&Path>) -> std::io::Result<()> {
    match path {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut file = NamedTempFile::new_in(dir)?;
            file.write_all(bytes)?;
            file.as_file().sync_all()?;
            file.persist(path).map_err(|e| e.error)?;
            Ok(())
        }
    }
}
