//! Deterministic CSV and JSON emission.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde_json::{Number, Value};

pub const SCHEMA_VERSION: u32 = 1;
pub const OUTPUT_DIR_ENV: &str = "CFDUPLEX_OUTPUT_DIR";

/// 17 significant digits: round-trip exact for `f64`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

#[derive(Debug, Clone)]
pub enum Cell {
    F(f64),
    U(u64),
    S(String),
    Empty,
}

impl Cell {
    pub fn opt_f(x: Option<f64>) -> Cell {
        x.map(Cell::F).unwrap_or(Cell::Empty)
    }

    fn render(&self) -> String {
        match self {
            Cell::F(x) => fmt_f64(*x),
            Cell::U(x) => x.to_string(),
            Cell::S(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::U(x as u64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::S(s.to_string())
    }
}

/// CSV table whose first column is always `schema_version`.
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        let mut header = vec!["schema_version"];
        header.extend_from_slice(columns);
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len() + 1, self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> std::io::Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            let mut rec = vec![SCHEMA_VERSION.to_string()];
            rec.extend(row.iter().map(Cell::render));
            w.write_record(&rec)?;
        }
        w.into_inner().map_err(|e| e.into_error())
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (name, cell) in self.header[1..].iter().zip(row) {
                    let v = match cell {
                        Cell::F(x) => Value::from(*x),
                        Cell::U(x) => Value::from(*x),
                        Cell::S(s) => Value::from(s.clone()),
                        Cell::Empty => Value::Null,
                    };
                    obj.insert(name.to_string(), v);
                }
                Value::Object(obj)
            })
            .collect();
        serde_json::json!({ "schema_version": SCHEMA_VERSION, "rows": rows })
    }
}

/// Rewrites every non-integer number with 17 significant digits.
pub fn normalize_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_u64() || n.is_i64()) => match n.as_f64() {
            Some(x) if x.is_finite() => Value::Number(Number::from_str(&fmt_f64(x)).expect("valid number")),
            _ => Value::Null,
        },
        Value::Array(a) => Value::Array(a.into_iter().map(normalize_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, normalize_floats(v))).collect()),
        other => other,
    }
}

pub fn json_bytes(v: Value) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(&normalize_floats(v)).expect("serializable");
    out.push(b'\n');
    out
}

/// Relative paths resolve against the output-directory env var when set.
pub fn resolve(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Some(dir) = std::env::var_os(OUTPUT_DIR_ENV) {
            return PathBuf::from(dir).join(path);
        }
    }
    path.to_path_buf()
}

pub fn default_dir() -> PathBuf {
    std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."))
}

pub fn emit(bytes: &[u8], path: Option<&Path>) -> std::io::Result<()> {
    match path {
        Some(p) => {
            let p = resolve(p);
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(p, bytes)
        }
        None => std::io::stdout().lock().write_all(bytes),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, 0.140625, 1e-300, 123456.789] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().replace(['.', '-'], "");
            assert_eq!(mantissa.len(), 17);
        }
    }

    #[test]
    fn json_floats_are_rewritten() {
        let v = normalize_floats(serde_json::json!({ "a": 0.25, "n": 3 }));
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, r#"{"a":2.5000000000000000e-1,"n":3}"#);
    }

    #[test]
    fn csv_has_schema_column() {
        let mut t = Table::new(&["x", "y"]);
        t.push(vec![Cell::F(0.5), Cell::Empty]);
        let text = String::from_utf8(t.to_csv().unwrap()).unwrap();
        assert_eq!(text, "schema_version,x,y\n1,5.0000000000000000e-1,\n");
    }
}
