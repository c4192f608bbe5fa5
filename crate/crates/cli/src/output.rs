//! CSV artifacts with `#` metadata headers.
//!
//! `# key = value` lines hold the effective configuration and can be fed
//! back with `--replay`; `#!` lines are informational. Tables are fully
//! built in memory and written to a temporary name, then renamed, so a
//! failed run leaves no partial files behind.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::config::{format_float, Echo};

#[derive(Debug, Clone, Default)]
pub struct Metadata {
    pub config: Echo,
    pub info: Vec<(String, String)>,
}

impl Metadata {
    pub fn info(&mut self, key: &str, value: impl ToString) {
        self.info.push((key.to_string(), value.to_string()));
    }

    pub fn info_float(&mut self, key: &str, value: f64) {
        self.info(key, format_float(value));
    }
}

/// A CSV cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(usize),
    Text(&'static str),
}

impl Cell {
    fn render(self) -> String {
        match self {
            Cell::Float(x) => format_float(x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, columns: Vec<String>) -> Self {
        Self {
            name,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "{}: row width", self.name);
        self.rows.push(row);
    }

    fn render(&self, meta: &Metadata) -> String {
        let mut out = String::new();
        out.push_str(&format!("#! qutrit {}\n", qutrit_core::VERSION));
        for (k, v) in &meta.config.pairs {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        for (k, v) in &meta.info {
            out.push_str(&format!("#! {k} = {v}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.render()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

struct Pending {
    tmp: PathBuf,
    target: PathBuf,
}

impl Drop for Pending {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.tmp);
    }
}

/// Writes all tables into `dir`, or none of them.
pub fn write_all(dir: &Path, meta: &Metadata, tables: &[Table]) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut pending = Vec::with_capacity(tables.len());
    for t in tables {
        let target = dir.join(t.name);
        let tmp = dir.join(format!(".{}.partial", t.name));
        let p = Pending { tmp, target };
        let mut f = fs::File::create(&p.tmp)?;
        pending.push(p);
        f.write_all(t.render(meta).as_bytes())?;
        f.sync_all()?;
    }
    let mut written = Vec::with_capacity(pending.len());
    for p in &pending {
        fs::rename(&p.tmp, &p.target)?;
        written.push(p.target.clone());
    }
    Ok(written)
}
