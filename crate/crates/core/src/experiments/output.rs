//! Result tables as CSV and the run manifest.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    /// Printed `{:.16e}`: 17 significant digits, lossless for f64.
    Float(f64),
    Text(String),
    Null,
}

impl Cell {
    pub fn float_or_null(x: Option<f64>) -> Cell {
        x.map_or(Cell::Null, Cell::Float)
    }

    pub fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Null => String::new(),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    /// File stem of the CSV.
    pub name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, header: &[&'static str]) -> Self {
        Table { name: name.to_string(), header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| std::io::Error::other(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(format!("{}.csv", self.name));
        std::fs::write(&path, self.to_csv()?)?;
        Ok(path)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub item: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Versions {
    pub harper_core: &'static str,
    pub faer: &'static str,
}

pub const VERSIONS: Versions = Versions { harper_core: env!("CARGO_PKG_VERSION"), faer: "0.24" };

/// Everything needed to reproduce or audit a run. Timings are recorded
/// here rather than in the CSV, which stays byte-identical across reruns.
#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub experiment: String,
    pub id: String,
    pub config_path: String,
    pub config_sha256: String,
    pub config: serde_json::Value,
    pub seed: u64,
    pub workers: usize,
    pub versions: Versions,
    pub outputs: Vec<String>,
    pub failures: Vec<String>,
    pub warnings: Vec<String>,
    pub total_seconds: f64,
    pub timings: Vec<Timing>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

impl Manifest {
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(format!("{}.manifest.json", self.experiment));
        let text = serde_json::to_string_pretty(self).map_err(|e| std::io::Error::other(e.to_string()))?;
        std::fs::write(&path, text + "\n")?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering() {
        assert_eq!(Cell::Float(0.5).render(), "5.0000000000000000e-1");
        assert_eq!(Cell::Float(0.1).render().parse::<f64>().unwrap(), 0.1);
        let x = 1.0 / 3.0;
        assert_eq!(Cell::Float(x).render().parse::<f64>().unwrap(), x);
        assert_eq!(Cell::Null.render(), "");
        let mut t = Table::new("t", &["a", "b", "c"]);
        t.push(vec![1usize.into(), Cell::Null, "x,y".into()]);
        assert_eq!(t.to_csv().unwrap(), "a,b,c\n1,,\"x,y\"\n");
    }

    #[test]
    fn hashing() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
