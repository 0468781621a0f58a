use clap::ValueEnum;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{Map, Value};

use ellext::numeric::to_scientific;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Rows of strings under a fixed header. Numbers arrive already formatted,
/// so exact integers are never rounded on the way out.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    /// Set when the rows record a disagreement the caller should report.
    pub failure: Option<String>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            failure: None,
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Flattens a JSON object into `key,value` rows, nested keys joined by dots.
    pub fn from_object(v: &Value) -> Self {
        fn walk(prefix: &str, v: &Value, out: &mut Table) {
            match v {
                Value::Object(map) => {
                    for (k, v) in map {
                        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                        walk(&key, v, out);
                    }
                }
                Value::Array(items) => {
                    for (i, v) in items.iter().enumerate() {
                        walk(&format!("{prefix}.{i}"), v, out);
                    }
                }
                Value::String(s) => out.push(vec![prefix.to_string(), s.clone()]),
                Value::Null => out.push(vec![prefix.to_string(), String::new()]),
                other => out.push(vec![prefix.to_string(), other.to_string()]),
            }
        }
        let mut table = Table::new(&["key", "value"]);
        walk("", v, &mut table);
        table
    }

    pub fn to_csv(&self) -> Result<String, String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(|e| e.to_string())?;
        for row in &self.rows {
            w.write_record(row).map_err(|e| e.to_string())?;
        }
        let bytes = w.into_inner().map_err(|e| e.to_string())?;
        String::from_utf8(bytes).map_err(|e| e.to_string())
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let map: Map<String, Value> = self
                    .header
                    .iter()
                    .cloned()
                    .zip(row.iter().map(|s| Value::String(s.clone())))
                    .collect();
                Value::Object(map)
            })
            .collect();
        serde_json::to_string_pretty(&Value::Array(rows)).expect("serializable") + "\n"
    }
}

/// Three significant digits, rounded up so the printed radius still covers
/// the true one.
pub fn radius_string(r: &BigRational) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let padded = r + r / BigRational::from_integer(BigInt::from(500));
    to_scientific(&padded, 3)
}
