//! Rendering of command results as JSON, CSV or plain text.

use serde_json::{json, Value};

use shifted_subset::exact::{self, Integer, Rational};

use crate::config::Format;
use crate::error::LabResult;

/// Rows for the CSV and plain renderings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// Everything a command produced, plus the exit status it asks for.
#[derive(Debug, Clone)]
pub struct Emission {
    pub json: Value,
    pub table: Table,
    /// Replaces the table in plain mode when set.
    pub plain: Option<String>,
    pub exit_code: u8,
}

impl Emission {
    pub fn new(json: Value, table: Table) -> Self {
        Emission {
            json,
            table,
            plain: None,
            exit_code: 0,
        }
    }

    pub fn render(&self, format: Format) -> LabResult<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.json)? + "\n"),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.table.columns)?;
                for row in &self.table.rows {
                    w.write_record(row)?;
                }
                let bytes = w.into_inner().map_err(|e| e.into_error())?;
                Ok(String::from_utf8_lossy(&bytes).into_owned())
            }
            Format::Plain => Ok(match &self.plain {
                Some(text) => text.clone(),
                None => {
                    let mut out = self.table.columns.join("\t") + "\n";
                    for row in &self.table.rows {
                        out += &row.join("\t");
                        out.push('\n');
                    }
                    out
                }
            }),
        }
    }
}

/// `{numerator, denominator, decimal}` for an exact value.
pub fn exact_json(q: &Rational) -> Value {
    json!({
        "numerator": q.numer().to_string(),
        "denominator": q.denom().to_string(),
        "decimal": exact::to_f64(q),
    })
}

/// Same as [`exact_json`] without reducing `num / den`.
pub fn fraction_json(num: &Integer, den: &Integer) -> Value {
    json!({
        "numerator": num.to_string(),
        "denominator": den.to_string(),
        "decimal": exact::quotient_to_f64(num, den),
    })
}

pub fn exact_cells(num: &Integer, den: &Integer) -> [String; 3] {
    [
        num.to_string(),
        den.to_string(),
        format!("{}", exact::quotient_to_f64(num, den)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_all_formats() {
        let mut table = Table::new(&["a", "b"]);
        table.push(vec!["1".into(), "x,y".into()]);
        let em = Emission::new(json!({"a": 1}), table);
        assert_eq!(em.render(Format::Csv).unwrap(), "a,b\n1,\"x,y\"\n");
        assert_eq!(em.render(Format::Plain).unwrap(), "a\tb\n1\tx,y\n");
        assert!(em.render(Format::Json).unwrap().contains("\"a\": 1"));
    }

    #[test]
    fn exact_fields() {
        let v = exact_json(&exact::ratio(-3, 12));
        assert_eq!(v["numerator"], "-1");
        assert_eq!(v["denominator"], "4");
        assert_eq!(v["decimal"], -0.25);
    }
}
