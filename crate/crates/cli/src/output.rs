//! Rendering of command results in the three output formats.
//!
//! A result is a table with a fixed column order. Text mode prints one
//! `key: value` line per column with a blank line between rows; structured
//! mode is a JSON array of objects with keys in column order; csv is a
//! header row plus one line per row with minimal quoting. All numbers are
//! pre-rendered as exact decimal strings upstream.

use std::io::Write;

#[derive(Copy, Clone, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Structured,
    Csv,
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn render(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Text => self.render_text(out),
            Format::Structured => self.render_json(out),
            Format::Csv => self.render_csv(out),
        }
    }

    fn render_text(&self, out: &mut dyn Write) -> std::io::Result<()> {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(out)?;
            }
            for (name, value) in self.columns.iter().zip(row) {
                writeln!(out, "{name}: {value}")?;
            }
        }
        Ok(())
    }

    fn render_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (name, value) in self.columns.iter().zip(row) {
                    obj.insert(name.to_string(), serde_json::Value::String(value.clone()));
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        let text = serde_json::to_string_pretty(&rows).expect("serializable");
        writeln!(out, "{text}")
    }

    fn render_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| csv_escape(c)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

fn csv_escape(cell: &str) -> String {
    if cell.contains(',') || cell.contains('"') || cell.contains('\n') {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_escape("plain"), "plain");
        assert_eq!(csv_escape("a,b"), "\"a,b\"");
        assert_eq!(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn renders_all_formats() {
        let mut t = Table::new(vec!["a", "b"]);
        t.push(vec!["1".into(), "x,y".into()]);
        for fmt in [Format::Text, Format::Structured, Format::Csv] {
            let mut buf = Vec::new();
            t.render(fmt, &mut buf).unwrap();
            assert!(!buf.is_empty());
        }
        let mut buf = Vec::new();
        t.render(Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n1,\"x,y\"\n");
    }
}
