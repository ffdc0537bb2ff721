//! Deterministic tabular reports with a checksum over the canonical
//! serialization, printable as text, CSV or JSON.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub experiment: String,
    pub params: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(experiment: &str) -> Self {
        Report {
            experiment: experiment.to_string(),
            params: Vec::new(),
            columns: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn columns(mut self, columns: &[&str]) -> Self {
        self.columns = columns.iter().map(|c| c.to_string()).collect();
        self
    }

    pub fn row(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.columns.len(), "row width mismatch");
        self.rows.push(cells);
    }

    fn canonical_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.experiment);
        out.push('\n');
        for (k, v) in &self.params {
            out.push_str(&format!("{k}={v}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn checksum(&self) -> String {
        let digest = Sha256::digest(self.canonical_text().as_bytes());
        let mut hex = String::with_capacity(64);
        for byte in digest {
            hex.push_str(&format!("{byte:02x}"));
        }
        hex
    }

    pub fn print_human(&self) {
        println!("experiment: {}", self.experiment);
        for (k, v) in &self.params {
            println!("  {k} = {v}");
        }
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        for row in &self.rows {
            for (idx, cell) in row.iter().enumerate() {
                widths[idx] = widths[idx].max(cell.len());
            }
        }
        let header: Vec<String> = self
            .columns
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        println!("{}", header.join("  "));
        for row in &self.rows {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            println!("{}", line.join("  "));
        }
        println!("checksum: {}", self.checksum());
    }

    pub fn write_csv(&self, path: &Path) -> io::Result<()> {
        let mut file = File::create(path)?;
        writeln!(file, "# experiment: {}", self.experiment)?;
        for (k, v) in &self.params {
            writeln!(file, "# {k}: {v}")?;
        }
        writeln!(file, "{}", self.columns.join(","))?;
        for row in &self.rows {
            writeln!(file, "{}", row.join(","))?;
        }
        writeln!(file, "# checksum: {}", self.checksum())?;
        Ok(())
    }

    pub fn write_json(&self, path: &Path) -> io::Result<()> {
        #[derive(Serialize)]
        struct WithChecksum<'a> {
            #[serde(flatten)]
            report: &'a Report,
            checksum: String,
        }
        let wrapped = WithChecksum { report: self, checksum: self.checksum() };
        let mut file = File::create(path)?;
        writeln!(file, "{}", serde_json::to_string_pretty(&wrapped)?)?;
        Ok(())
    }
}
