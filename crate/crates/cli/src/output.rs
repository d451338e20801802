use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;

use crate::error::CliError;

/// Significant digits of every CSV number.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Decimal text with [`SIGNIFICANT_DIGITS`] significant digits; scientific notation
/// outside `1e-5 ≤ |x| < 1e12`, `inf`/`-inf`/`nan` for non-finite values.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

/// CSV table with a leading `# ...` comment line and a header row.
pub struct Table {
    pub comment: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = format!("# {}\n{}\n", self.comment, self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_number(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Rows as JSON objects keyed by column name, with the comment as metadata.
    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Map<String, serde_json::Value>> = self
            .rows
            .iter()
            .map(|row| {
                self.columns
                    .iter()
                    .zip(row)
                    .map(|(c, &x)| (c.to_string(), json_number(x)))
                    .collect()
            })
            .collect();
        let doc = serde_json::json!({ "comment": self.comment, "rows": rows });
        serde_json::to_string_pretty(&doc).expect("table serialization") + "\n"
    }
}

fn json_number(x: f64) -> serde_json::Value {
    if x.is_finite() {
        serde_json::Value::from(x)
    } else {
        serde_json::Value::from(format_number(x))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serialization") + "\n"
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_number(0.5), "0.500000000000");
        assert_eq!(format_number(std::f64::consts::E / (1.0 + std::f64::consts::E)), "0.731058578630");
        assert_eq!(format_number(2.0), "2.00000000000");
        assert_eq!(format_number(123.456), "123.456000000");
        assert_eq!(format_number(1.5e-7), "1.50000000000e-7");
        assert_eq!(format_number(0.99999999999), "0.999999999990");
        assert_eq!(format_number(9.999999999999e-1), "1.00000000000");
        assert_eq!(format_number(f64::INFINITY), "inf");
        assert_eq!(format_number(0.0), "0");
    }

    #[test]
    fn csv_layout() {
        let t = Table {
            comment: "gaussnet test".into(),
            columns: vec!["r", "F"],
            rows: vec![vec![0.0, 0.5], vec![1.0, f64::INFINITY]],
        };
        assert_eq!(
            t.to_csv(),
            "# gaussnet test\nr,F\n0,0.500000000000\n1.00000000000,inf\n"
        );
    }
}
