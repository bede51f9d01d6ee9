use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const MANIFEST_NAME: &str = "manifest.json";

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let ctx = || format!("writing {}", path.display());
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(ctx(), e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(ctx(), e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(ctx(), e))?;
    tmp.persist(path).map_err(|e| CliError::io(ctx(), e.error))?;
    Ok(())
}

pub fn csv_bytes<R: Serialize>(header: &[&str], rows: impl IntoIterator<Item = R>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    let map = |e: csv::Error| CliError::io("encoding CSV", std::io::Error::other(e));
    w.write_record(header).map_err(map)?;
    for r in rows {
        w.serialize(r).map_err(map)?;
    }
    w.into_inner().map_err(|e| CliError::io("encoding CSV", e.into_error()))
}

pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value)
        .map_err(|e| CliError::io("encoding JSON", std::io::Error::other(e)))?;
    bytes.push(b'\n');
    Ok(bytes)
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub path: String,
    pub sha256: String,
}

/// Provenance of one invocation; the only file carrying a timestamp.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub parameters: Value,
    pub seeds: Vec<u64>,
    pub outputs: Vec<OutputRecord>,
    pub timestamp: String,
}

/// `SOURCE_DATE_EPOCH` when set, otherwise the current UTC time.
pub fn timestamp() -> String {
    let at = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| DateTime::<Utc>::from_timestamp(secs, 0))
        .unwrap_or_else(Utc::now);
    at.to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// Files emitted by one command, recorded for the manifest.
pub struct OutputSet {
    dir: PathBuf,
    records: Vec<OutputRecord>,
}

impl OutputSet {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
        Ok(Self { dir: dir.to_path_buf(), records: Vec::new() })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        write_atomic(&path, bytes)?;
        let digest = Sha256::digest(bytes);
        let sha256 = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.records.push(OutputRecord { path: name.to_string(), sha256 });
        Ok(path)
    }

    pub fn finish(self, subcommand: &'static str, parameters: Value, seeds: Vec<u64>) -> Result<PathBuf, CliError> {
        let manifest = RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            parameters,
            seeds,
            outputs: self.records,
            timestamp: timestamp(),
        };
        let path = self.dir.join(MANIFEST_NAME);
        write_atomic(&path, &json_bytes(&manifest)?)?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_header_and_dot_decimals() {
        let bytes = csv_bytes(&["k", "pi_k"], vec![(0u32, 0.5f64), (1, 0.25)]).unwrap();
        assert_eq!(String::from_utf8(bytes).unwrap(), "k,pi_k\n0,0.5\n1,0.25\n");
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn manifest_lists_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let mut set = OutputSet::create(dir.path()).unwrap();
        set.write("x.csv", b"a\n1\n").unwrap();
        let m = set.finish("sweep", serde_json::json!({"theta": 0.5}), vec![]).unwrap();
        let v: Value = serde_json::from_slice(&std::fs::read(m).unwrap()).unwrap();
        assert_eq!(v["outputs"][0]["path"], "x.csv");
        assert_eq!(v["outputs"][0]["sha256"].as_str().unwrap().len(), 64);
        assert_eq!(v["subcommand"], "sweep");
    }
}
