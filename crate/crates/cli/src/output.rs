//! The versioned output record and its JSON and CSV renderings.

use rug::Float;
use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub seed: Option<u64>,
    pub precision_bits: u32,
    pub tie_policy: &'static str,
    pub tolerances: Map<String, Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub schema_version: &'static str,
    pub command: String,
    pub params: Map<String, Value>,
    pub results: Map<String, Value>,
    pub provenance: Provenance,
    pub precision_bits: u32,
    /// Key of the array in `results` rendered by `--format csv`.
    #[serde(skip)]
    pub table: &'static str,
}

/// A real at working precision, as the decimal string that parses back to
/// the same value at that precision.
pub fn real(x: &Float) -> Value {
    Value::String(x.to_string_radix(10, None))
}

pub fn real_opt(x: Option<&Float>) -> Value {
    x.map_or(Value::Null, real)
}

pub fn reals(xs: &[Float]) -> Value {
    Value::Array(xs.iter().map(real).collect())
}

/// A double as its shortest round-trip decimal; non-finite values become null.
pub fn double(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn to_json(record: &OutputRecord) -> String {
    let mut s = serde_json::to_string_pretty(record).expect("output record serializes");
    s.push('\n');
    s
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        other => other.to_string(),
    }
}

/// The table `results[record.table]` as CSV, with the header taken from
/// the keys of its first row. Cells carry the same text as the JSON.
pub fn to_csv(record: &OutputRecord) -> Result<String, String> {
    let rows = record
        .results
        .get(record.table)
        .and_then(Value::as_array)
        .ok_or_else(|| format!("command '{}' has no tabular output", record.command))?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<String> = match rows.first().and_then(Value::as_object) {
        Some(first) => first.keys().cloned().collect(),
        None => Vec::new(),
    };
    if !header.is_empty() {
        w.write_record(&header).map_err(|e| e.to_string())?;
    }
    for row in rows {
        let obj = row.as_object().ok_or("table rows must be objects")?;
        let cells: Vec<String> = header
            .iter()
            .map(|k| obj.get(k).map(cell).unwrap_or_default())
            .collect();
        w.write_record(&cells).map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}
