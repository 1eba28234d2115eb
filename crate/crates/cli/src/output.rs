//! Rendering command results as JSON, CSV or Markdown.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde_json::Value;

use crate::error::{CliError, Result};
use crate::formats::display_path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

/// Header row plus data rows, already formatted as text.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| (*h).to_owned()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Result of a command in both structured and tabular form.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub json: Value,
    pub table: Table,
}

/// Text of a JSON scalar as it appears in a table cell.
pub fn cell(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn num(x: f64) -> String {
    cell(&Value::from(x))
}

pub fn render(rendered: &Rendered, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&rendered.json)
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            text.push('\n');
            Ok(text)
        }
        Format::Csv => to_csv(&rendered.table),
        Format::Md => Ok(to_markdown(&rendered.table)),
    }
}

fn to_csv(table: &Table) -> Result<String> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let runtime = |e: csv::Error| CliError::Runtime(e.to_string());
    writer.write_record(&table.header).map_err(runtime)?;
    for row in &table.rows {
        writer.write_record(row).map_err(runtime)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Runtime(e.to_string()))
}

fn md_escape(text: &str) -> String {
    text.replace('|', "\\|")
}

fn to_markdown(table: &Table) -> String {
    let mut out = String::new();
    let line = |cells: &[String]| {
        let cells: Vec<String> = cells.iter().map(|c| md_escape(c)).collect();
        format!("| {} |\n", cells.join(" | "))
    };
    out.push_str(&line(&table.header));
    out.push_str(&format!("|{}\n", "---|".repeat(table.header.len())));
    for row in &table.rows {
        out.push_str(&line(row));
    }
    out
}

/// Writes to `path`, or to standard output when absent.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    let write_err = |source| CliError::Write {
        path: display_path(path),
        source,
    };
    match path {
        Some(p) => fs::write(p, text).map_err(write_err),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(write_err)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Rendered {
        let mut table = Table::new(&["a", "b"]);
        table.push(vec!["1".into(), "x|y".into()]);
        table.push(vec!["2".into(), "p,q".into()]);
        Rendered {
            json: serde_json::json!({"schema_version": 1}),
            table,
        }
    }

    #[test]
    fn csv_quotes_and_uses_lf() {
        let text = render(&sample(), Format::Csv).unwrap();
        assert_eq!(text, "a,b\n1,x|y\n2,\"p,q\"\n");
    }

    #[test]
    fn markdown_escapes_pipes() {
        let text = render(&sample(), Format::Md).unwrap();
        assert_eq!(text, "| a | b |\n|---|---|\n| 1 | x\\|y |\n| 2 | p,q |\n");
    }

    #[test]
    fn numbers_use_shortest_round_trip() {
        assert_eq!(num(0.1), "0.1");
        assert_eq!(num(1.0), "1.0");
        assert_eq!(num(f64::NAN), "");
    }
}
