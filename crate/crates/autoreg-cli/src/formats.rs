//! Sample-file ingestion and CSV primitives.
//!
//! Sample files hold one signal: `.csv` is one value per line with an
//! optional header, `.f64` is raw little-endian 64-bit floats. Result tables
//! are comma-separated with a header row; fields containing commas or quotes
//! are quoted.

use crate::error::{io_ctx, CliError, Result};
use std::fs;
use std::path::Path;

/// Reads a signal from a sample file, dispatching on the extension.
pub fn read_samples(path: &Path) -> Result<Vec<f64>> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => read_samples_csv(path),
        Some("f64") => read_samples_f64(path),
        other => Err(CliError::usage(format!(
            "unsupported sample file extension {:?} for {} (expected .csv or .f64)",
            other.unwrap_or(""),
            path.display()
        ))),
    }
}

fn read_samples_csv(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(io_ctx(path, "reading"))?;
    parse_samples_csv(&text, path)
}

/// Parses single-column sample text; `origin` names the source in errors.
pub fn parse_samples_csv(text: &str, origin: &Path) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let field = line.trim();
        if field.is_empty() {
            continue;
        }
        match field.parse::<f64>() {
            Ok(v) => out.push(v),
            // The first line may be a header naming the column.
            Err(_) if idx == 0 => continue,
            Err(_) => {
                return Err(CliError::io(format!(
                    "{}: line {} is not a number: {field:?}",
                    origin.display(),
                    idx + 1
                )))
            }
        }
    }
    Ok(out)
}

fn read_samples_f64(path: &Path) -> Result<Vec<f64>> {
    let bytes = fs::read(path).map_err(io_ctx(path, "reading"))?;
    parse_samples_f64(&bytes, path)
}

/// Decodes raw little-endian samples; `origin` names the source in errors.
pub fn parse_samples_f64(bytes: &[u8], origin: &Path) -> Result<Vec<f64>> {
    if !bytes.len().is_multiple_of(8) {
        return Err(CliError::io(format!(
            "{}: length {} is not a multiple of 8 bytes",
            origin.display(),
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect())
}

/// Quotes a CSV field when it contains a delimiter, quote, or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Splits one CSV line honoring quoted fields.
pub fn split_csv_line(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' if quoted => {
                if chars.peek() == Some(&'"') {
                    chars.next();
                    cur.push('"');
                } else {
                    quoted = false;
                }
            }
            '"' if cur.is_empty() => quoted = true,
            ',' if !quoted => {
                fields.push(std::mem::take(&mut cur));
            }
            _ => cur.push(c),
        }
    }
    fields.push(cur);
    fields
}

/// A parsed CSV table: header names and rows of raw fields.
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(io_ctx(path, "reading"))?;
        Self::parse(&text, path)
    }

    /// Parses table text; `origin` names the source in errors.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = match lines.next() {
            Some(h) => split_csv_line(h),
            None => {
                return Err(CliError::usage(format!(
                    "{}: empty CSV, nothing to plot",
                    origin.display()
                )))
            }
        };
        let rows = lines.map(split_csv_line).collect();
        Ok(Self { header, rows })
    }

    /// Index of a named column, or a usage error naming what is missing.
    pub fn column(&self, name: &str, path: &Path) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| {
                CliError::usage(format!(
                    "{}: missing column {name:?} (found: {})",
                    path.display(),
                    self.header.join(", ")
                ))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting_round_trip() {
        let fields = ["plain", "with,comma", "with\"quote", "a,b\"c"];
        let line: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
        let parsed = split_csv_line(&line.join(","));
        assert_eq!(parsed, fields);
    }

    #[test]
    fn split_handles_empty_fields() {
        assert_eq!(split_csv_line("a,,b"), vec!["a", "", "b"]);
        assert_eq!(split_csv_line(""), vec![""]);
    }
}
