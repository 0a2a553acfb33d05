// SPDX-License-Identifier: MIT OR Apache-2.0

//! All-or-nothing output directories with a run manifest.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the subcommand, without `--out`/`--force`, seed made
    /// explicit. `wavesc replay` re-parses these.
    pub argv: Vec<String>,
    /// Working directory the relative input paths refer to.
    pub cwd: String,
    pub config: serde_json::Value,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub started_unix_ms: u128,
    pub wall_clock_ms: u128,
}

/// Files collected in memory and written together by [`Staged::commit`].
pub struct Staged {
    out: PathBuf,
    force: bool,
    files: Vec<(String, Vec<u8>)>,
    inputs: Vec<FileDigest>,
    started: Instant,
    started_unix_ms: u128,
}

impl Staged {
    /// Fails early if `out` exists and `force` is off.
    pub fn new(out: &Path, force: bool) -> CliResult<Self> {
        if out.exists() && !force {
            return Err(CliError::input(format!(
                "{} exists; pass --force to replace it",
                out.display()
            )));
        }
        Ok(Self {
            out: out.to_path_buf(),
            force,
            files: Vec::new(),
            inputs: Vec::new(),
            started: Instant::now(),
            started_unix_ms: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_millis()),
        })
    }

    pub fn input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push(FileDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
        });
    }

    pub fn add(&mut self, name: &str, bytes: Vec<u8>) {
        self.files.push((name.to_string(), bytes));
    }

    pub fn add_json<T: Serialize>(&mut self, name: &str, value: &T) {
        let mut bytes = serde_json::to_vec_pretty(value).expect("serializable output");
        bytes.push(b'\n');
        self.add(name, bytes);
    }

    /// Writes every file plus `manifest.json` into a sibling temporary
    /// directory, then renames it into place.
    pub fn commit(
        mut self,
        command: &str,
        argv: Vec<String>,
        config: serde_json::Value,
        seed: Option<u64>,
    ) -> CliResult<PathBuf> {
        let outputs = self
            .files
            .iter()
            .map(|(name, bytes)| FileDigest {
                path: name.clone(),
                sha256: sha256_hex(bytes),
            })
            .collect();
        let manifest = RunManifest {
            command: command.to_string(),
            argv,
            cwd: std::env::current_dir()
                .map(|p| p.display().to_string())
                .unwrap_or_default(),
            config,
            inputs: std::mem::take(&mut self.inputs),
            outputs,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix_ms: self.started_unix_ms,
            wall_clock_ms: self.started.elapsed().as_millis(),
        };
        self.add_json("manifest.json", &manifest);

        let parent = match self.out.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        fs::create_dir_all(&parent).map_err(|e| CliError::io(&parent, e))?;
        let name = self
            .out
            .file_name()
            .ok_or_else(|| CliError::input(format!("bad output path {}", self.out.display())))?
            .to_string_lossy()
            .into_owned();
        let tmp = parent.join(format!(".{name}.partial-{}", std::process::id()));
        let _ = fs::remove_dir_all(&tmp);
        let write_all = || -> std::io::Result<()> {
            fs::create_dir(&tmp)?;
            for (file, bytes) in &self.files {
                fs::write(tmp.join(file), bytes)?;
            }
            Ok(())
        };
        if let Err(e) = write_all() {
            let _ = fs::remove_dir_all(&tmp);
            return Err(CliError::io(&tmp, e));
        }
        if self.out.exists() {
            if !self.force {
                let _ = fs::remove_dir_all(&tmp);
                return Err(CliError::input(format!("{} exists", self.out.display())));
            }
            let remove = if self.out.is_dir() {
                fs::remove_dir_all(&self.out)
            } else {
                fs::remove_file(&self.out)
            };
            remove.map_err(|e| CliError::io(&self.out, e))?;
        }
        fs::rename(&tmp, &self.out).map_err(|e| CliError::io(&self.out, e))?;
        Ok(self.out)
    }
}
