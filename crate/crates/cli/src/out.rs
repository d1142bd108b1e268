//! Artifact files and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use automorph::CPoint;

#[derive(Serialize)]
struct Entry {
    file: String,
    bytes: usize,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    core_version: &'static str,
    subcommand: &'a str,
    config: Option<String>,
    config_sha256: Option<String>,
    seed: u64,
    parameters: serde_json::Value,
    artifacts: &'a [Entry],
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Collects the files written by one subcommand.
pub struct Artifacts {
    dir: PathBuf,
    entries: Vec<Entry>,
}

impl Artifacts {
    pub fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))?;
        Ok(Artifacts { dir: dir.to_path_buf(), entries: Vec::new() })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.entries.push(Entry { file: name.to_string(), bytes: bytes.len(), sha256: sha256_hex(bytes) });
        Ok(())
    }

    pub fn csv(&mut self, name: &str, table: Table) -> Result<()> {
        let bytes = table.into_bytes()?;
        self.write(name, &bytes)
    }

    pub fn pgm(&mut self, name: &str, width: usize, height: usize, pixels: &[u8]) -> Result<()> {
        self.write(name, &automorph::io::pgm(width, height, pixels))
    }

    /// Writes `manifest.json` listing every artifact so far.
    pub fn finish(self, subcommand: &str, config: Option<&Path>, seed: u64, parameters: serde_json::Value) -> Result<()> {
        let (config_name, config_hash) = match config {
            Some(p) => {
                let bytes = fs::read(p).with_context(|| format!("reading {}", p.display()))?;
                (Some(p.display().to_string()), Some(sha256_hex(&bytes)))
            }
            None => (None, None),
        };
        let manifest = Manifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            core_version: automorph::VERSION,
            subcommand,
            config: config_name,
            config_sha256: config_hash,
            seed,
            parameters,
            artifacts: &self.entries,
        };
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        let path = self.dir.join("manifest.json");
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

/// An in-memory CSV table.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Result<Self> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header.iter().map(|s| s.as_ref()))?;
        Ok(Table { writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn into_bytes(self) -> Result<Vec<u8>> {
        Ok(self.writer.into_inner().map_err(|e| e.into_error())?)
    }
}

/// `z0_re, z0_im, z1_re, ...` column names.
pub fn coord_header(n: usize) -> Vec<String> {
    (0..n).flat_map(|i| [format!("z{i}_re"), format!("z{i}_im")]).collect()
}

pub fn coords(p: &CPoint) -> Vec<String> {
    p.to_reals().iter().map(f64::to_string).collect()
}

pub fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}
