//! Format-independent report model and its three renderings.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Clone, Debug)]
pub struct Table {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: &str, headers: &[&str]) -> Self {
        Table {
            title: title.to_string(),
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<I, S>(&mut self, row: I)
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        self.rows.push(row.into_iter().map(|c| c.to_string()).collect());
    }
}

/// Everything a subcommand produces. `ok` drives the exit code.
#[derive(Clone, Debug)]
pub struct Report {
    pub title: String,
    pub json: Value,
    pub summary: Vec<(String, String)>,
    pub tables: Vec<Table>,
    pub ok: bool,
}

impl Report {
    pub fn render(&self, format: Format) -> Result<String, String> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).map_err(|e| e.to_string())?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => self.render_csv(),
            Format::Md => Ok(self.render_md()),
        }
    }

    fn render_csv(&self) -> Result<String, String> {
        let mut out = String::new();
        for (k, t) in self.tables.iter().enumerate() {
            if k > 0 {
                out.push('\n');
            }
            if self.tables.len() > 1 {
                writeln!(out, "# {}", t.title).expect("write to string");
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&t.headers).map_err(|e| e.to_string())?;
            for row in &t.rows {
                w.write_record(row).map_err(|e| e.to_string())?;
            }
            let bytes = w.into_inner().map_err(|e| e.to_string())?;
            out.push_str(&String::from_utf8(bytes).map_err(|e| e.to_string())?);
        }
        Ok(out)
    }

    fn render_md(&self) -> String {
        let mut out = format!("# {}\n\n", self.title);
        for (k, v) in &self.summary {
            writeln!(out, "- **{k}**: {v}").expect("write to string");
        }
        for t in &self.tables {
            write!(out, "\n## {}\n\n", t.title).expect("write to string");
            writeln!(out, "| {} |", t.headers.join(" | ")).expect("write to string");
            writeln!(out, "|{}", "---|".repeat(t.headers.len())).expect("write to string");
            for row in &t.rows {
                let cells: Vec<String> = row.iter().map(|c| c.replace('|', "\\|")).collect();
                writeln!(out, "| {} |", cells.join(" | ")).expect("write to string");
            }
        }
        out
    }
}
