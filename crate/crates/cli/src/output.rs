//! Output files. Everything is rendered in memory first, staged next to its
//! destination and renamed into place only once every file of a command has
//! been staged, so a failing command leaves no partial output behind.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;
use tempfile::NamedTempFile;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub platform_ref: Option<String>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub seed: Option<u64>,
    pub tool_version: String,
    /// Seconds since the Unix epoch; the only field that differs between
    /// identical runs.
    pub created_unix_s: u64,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            platform_ref: None,
            inputs: Vec::new(),
            outputs: Vec::new(),
            seed: None,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            created_unix_s: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

/// Writes `files` plus a manifest for the first of them.
pub fn commit(mut manifest: RunManifest, files: Vec<(PathBuf, Vec<u8>)>) -> Result<()> {
    manifest.outputs = files.iter().map(|(p, _)| p.display().to_string()).collect();
    let mut json = serde_json::to_vec_pretty(&manifest)?;
    json.push(b'\n');
    let manifest_file = manifest_path(&files[0].0);

    let mut staged = Vec::new();
    for (path, bytes) in files.iter().map(|(p, b)| (p.as_path(), b.as_slice())).chain([(manifest_file.as_path(), json.as_slice())]) {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        let mut tmp = NamedTempFile::new_in(dir).with_context(|| format!("cannot write to {}", dir.display()))?;
        tmp.write_all(bytes)?;
        tmp.flush()?;
        staged.push((tmp, path));
    }
    for (tmp, path) in staged {
        tmp.persist(path).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

/// Prints to stdout, or writes the file and its manifest when `out` is set.
pub fn emit(out: Option<&Path>, bytes: Vec<u8>, manifest: RunManifest) -> Result<()> {
    match out {
        Some(path) => commit(manifest, vec![(path.to_path_buf(), bytes)]),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}
