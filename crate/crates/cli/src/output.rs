//! Report files named `<command>-<timestamp>.<ext>`, written atomically.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

pub struct Outputs {
    dir: PathBuf,
    stem: String,
}

impl Outputs {
    pub fn new(dir: &Path, command: &str) -> anyhow::Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))?;
        let stamp = chrono::Utc::now().format("%Y%m%dT%H%M%S%.3fZ");
        Ok(Outputs { dir: dir.to_path_buf(), stem: format!("{command}-{stamp}") })
    }

    pub fn json<T: Serialize>(&self, value: &T) -> anyhow::Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write("json", text.as_bytes())
    }

    pub fn csv(&self, table: &Csv) -> anyhow::Result<PathBuf> {
        self.write("csv", &table.to_bytes()?)
    }

    fn write(&self, ext: &str, bytes: &[u8]) -> anyhow::Result<PathBuf> {
        let path = self.dir.join(format!("{}.{ext}", self.stem));
        let tmp = self.dir.join(format!(".{}.{ext}.tmp", self.stem));
        let mut f = fs::File::create(&tmp).with_context(|| format!("cannot write {}", tmp.display()))?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, &path).with_context(|| format!("cannot move report to {}", path.display()))?;
        eprintln!("wrote {}", path.display());
        Ok(path)
    }
}

/// Small in-memory table; cells are preformatted strings.
pub struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: &[String]) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells.to_vec());
    }

    fn to_bytes(&self) -> anyhow::Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(w.into_inner().map_err(|e| e.into_error())?)
    }
}
