//! Tabular output shared by every subcommand: named numeric columns,
//! deterministic row order, and a small metadata block (inputs, tool
//! version, timestamp). Emitted either as CSV — metadata in `#` comment
//! lines, floats in shortest round-trip text — or as a JSON object with
//! the rows keyed by column name.

use std::io::{self, Write};

use serde_json::{json, Map, Number, Value};

/// One table of results ready for emission.
#[derive(Clone, Debug)]
pub struct SweepResult {
    columns: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
    metadata: Vec<(String, String)>,
}

impl SweepResult {
    pub fn new(command: &str, columns: Vec<&'static str>) -> Self {
        let mut result = SweepResult { columns, rows: Vec::new(), metadata: Vec::new() };
        result.push_metadata("command", command);
        result.push_metadata("version", env!("CARGO_PKG_VERSION"));
        let stamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or_default();
        result.push_metadata("unix_time", stamp);
        result
    }

    /// Records an input parameter or summary value. Metadata never enters
    /// the data rows, so timestamps and the like stay out of the
    /// deterministic part of the output.
    pub fn push_metadata(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_owned(), value.to_string()));
    }

    /// Appends a data row; every value must be finite and the width must
    /// match the column list.
    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        assert!(row.iter().all(|v| v.is_finite()), "rows must be finite");
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[&'static str] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        for (key, value) in &self.metadata {
            writeln!(out, "# {key}: {value}")?;
        }
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(|&v| format_float(v)).collect();
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }

    pub fn write_json(&self, out: &mut dyn Write) -> io::Result<()> {
        let mut metadata = Map::new();
        for (key, value) in &self.metadata {
            metadata.insert(key.clone(), Value::String(value.clone()));
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut object = Map::new();
                for (&column, &value) in self.columns.iter().zip(row) {
                    let number = Number::from_f64(value).expect("rows are finite");
                    object.insert(column.to_owned(), Value::Number(number));
                }
                Value::Object(object)
            })
            .collect();
        let document = json!({
            "metadata": Value::Object(metadata),
            "columns": self.columns,
            "rows": rows,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&document)?)
    }
}

/// Shortest text that parses back to exactly the same bits. Ordinary
/// magnitudes print in plain decimal; extreme ones switch to scientific
/// notation so a 1e-15 residual does not become a wall of zeros.
pub fn format_float(v: f64) -> String {
    let magnitude = v.abs();
    if v != 0.0 && !(1e-4..1e15).contains(&magnitude) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        for &v in &[
            0.0,
            -0.0,
            1.0,
            -1.5,
            std::f64::consts::PI,
            1.0 / 3.0,
            0.1 + 0.2,
            3.733e-4,
            1.6653345369377348e-15,
            -2.5e-17,
            4.7e18,
            f64::MIN_POSITIVE,
            1.7320508075688772,
        ] {
            let text = format_float(v);
            let back: f64 = text.parse().expect("formatted float parses");
            assert_eq!(v.to_bits(), back.to_bits(), "{v} -> {text}");
        }
    }

    #[test]
    fn extreme_magnitudes_use_scientific_notation() {
        assert_eq!(format_float(1.5e-15), "1.5e-15");
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(0.5), "0.5");
        assert!(!format_float(250.0000625).contains('e'));
    }

    #[test]
    fn csv_layout_is_metadata_header_rows() {
        let mut result = SweepResult::new("demo", vec!["a", "b"]);
        result.push_metadata("x", 2.5);
        result.push_row(vec![1.0, 0.5]);
        result.push_row(vec![-2.0, 0.25]);
        let mut buffer = Vec::new();
        result.write_csv(&mut buffer).unwrap();
        let text = String::from_utf8(buffer).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# command: demo"));
        assert!(lines.iter().filter(|l| l.starts_with('#')).count() >= 4);
        let header = lines.iter().position(|l| *l == "a,b").expect("header line");
        assert_eq!(lines[header + 1], "1,0.5");
        assert_eq!(lines[header + 2], "-2,0.25");
    }

    #[test]
    fn json_mirrors_columns() {
        let mut result = SweepResult::new("demo", vec!["a", "b"]);
        result.push_row(vec![1.0, 0.5]);
        let mut buffer = Vec::new();
        result.write_json(&mut buffer).unwrap();
        let value: serde_json::Value = serde_json::from_slice(&buffer).unwrap();
        assert_eq!(value["columns"], serde_json::json!(["a", "b"]));
        assert_eq!(value["rows"][0]["a"], serde_json::json!(1.0));
        assert_eq!(value["rows"][0]["b"], serde_json::json!(0.5));
        assert_eq!(value["metadata"]["command"], serde_json::json!("demo"));
    }

    #[test]
    #[should_panic(expected = "row width")]
    fn row_width_is_enforced() {
        let mut result = SweepResult::new("demo", vec!["a", "b"]);
        result.push_row(vec![1.0]);
    }
}
