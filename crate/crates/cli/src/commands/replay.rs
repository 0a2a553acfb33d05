// SPDX-License-Identifier: MIT OR Apache-2.0

use std::path::{Path, PathBuf};

use clap::Parser;

use crate::args::{Cli, Command, Replay};
use crate::error::{CliError, CliResult};
use crate::io::read_bytes;
use crate::output::{sha256_hex, RunManifest};

fn absolute(p: &Path) -> CliResult<PathBuf> {
    std::path::absolute(p).map_err(|e| CliError::io(p, e))
}

fn read_manifest(path: &Path) -> CliResult<RunManifest> {
    let bytes = read_bytes(path)?;
    serde_json::from_slice(&bytes).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// Re-runs the recorded command from the recorded working directory and
/// compares output digests.
pub fn run(a: &Replay) -> CliResult<()> {
    let manifest_path = if a.manifest.is_dir() {
        a.manifest.join("manifest.json")
    } else {
        a.manifest.clone()
    };
    let original = read_manifest(&manifest_path)?;
    if original.command == "replay" {
        return Err(CliError::input("cannot replay a replay"));
    }
    let out = absolute(&a.output.out)?;
    std::env::set_current_dir(&original.cwd).map_err(|e| CliError::io(&original.cwd, e))?;
    for input in &original.inputs {
        let bytes = read_bytes(Path::new(&input.path))?;
        if sha256_hex(&bytes) != input.sha256 {
            return Err(CliError::input(format!(
                "input {} changed since the recorded run",
                input.path
            )));
        }
    }

    let mut argv = vec!["wavesc".to_string(), original.command.clone()];
    argv.extend(original.argv.iter().cloned());
    argv.push("--out".into());
    argv.push(out.display().to_string());
    if a.output.force {
        argv.push("--force".into());
    }
    let cli = Cli::try_parse_from(&argv)
        .map_err(|e| CliError::input(format!("recorded arguments no longer parse: {e}")))?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(CliError::input("cannot replay a replay"));
    }
    super::dispatch(cli.command, &argv[2..])?;

    let fresh = read_manifest(&out.join("manifest.json"))?;
    let differing: Vec<&str> = original
        .outputs
        .iter()
        .filter(|o| !fresh.outputs.contains(o))
        .map(|o| o.path.as_str())
        .collect();
    if differing.is_empty() {
        eprintln!("replay: {} outputs identical", original.outputs.len());
        Ok(())
    } else {
        Err(CliError::Numerical(format!(
            "replay outputs differ: {}",
            differing.join(", ")
        )))
    }
}
