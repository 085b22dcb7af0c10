//! Tabular files and their metadata sidecar.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

/// Comma-separated table with one header row. Floats are written in the
/// shortest form that parses back to the same bits.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            for (i, c) in row.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                match c {
                    Cell::Float(v) => write!(s, "{v:e}"),
                    Cell::Int(v) => write!(s, "{v}"),
                }
                .expect("writing to a String");
            }
            s.push('\n');
        }
        s
    }
}

/// Everything one run produces, held in memory until the run has succeeded.
#[derive(Clone, Debug, PartialEq)]
pub struct OutputBundle {
    /// `(file name, table)` in output order.
    pub tables: Vec<(String, Table)>,
    pub meta_name: String,
    /// TOML sidecar: the configuration echo followed by a `[meta]` table.
    pub meta: String,
}

impl OutputBundle {
    pub fn files(&self) -> Vec<(String, String)> {
        let mut v: Vec<(String, String)> = self.tables.iter().map(|(n, t)| (n.clone(), t.to_csv())).collect();
        v.push((self.meta_name.clone(), self.meta.clone()));
        v
    }

    /// Write every file into `dir`. Each file is staged under a temporary
    /// name first and renamed into place only once all of them are on disk,
    /// so a failed write leaves no partial output behind.
    pub fn write(&self, dir: &Path) -> io::Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let files = self.files();
        let mut staged: Vec<(PathBuf, PathBuf)> = Vec::new();
        let result = (|| {
            for (name, contents) in &files {
                let target = dir.join(name);
                let tmp = dir.join(format!(".{name}.tmp"));
                staged.push((tmp.clone(), target));
                let mut f = fs::File::create(&tmp)?;
                f.write_all(contents.as_bytes())?;
                f.sync_all()?;
            }
            Ok(())
        })();
        if let Err(e) = result {
            for (tmp, _) in &staged {
                let _ = fs::remove_file(tmp);
            }
            return Err(e);
        }
        let mut written = Vec::new();
        for (tmp, target) in staged {
            fs::rename(&tmp, &target)?;
            written.push(target);
        }
        Ok(written)
    }
}
