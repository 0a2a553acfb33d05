// SPDX-License-Identifier: MIT OR Apache-2.0

mod bench;
mod denoise;
mod eta;
mod poisson;
mod replay;
mod simulate;

use wavesc_core::{ResponseIndicator, Transform, WaveletSpec};

use crate::args::Command;
use crate::error::CliResult;
use crate::io::{csv_bytes, num};

/// Runs `command`; `raw` holds the arguments that followed the subcommand
/// name and is stored in the manifest for replay.
pub fn dispatch(command: Command, raw: &[String]) -> CliResult<()> {
    match command {
        Command::Denoise1d(a) => denoise::denoise1d(&a, raw),
        Command::Denoise2d(a) => denoise::denoise2d(&a, raw),
        Command::Simulate(a) => simulate::run(&a, raw),
        Command::Bench(a) => bench::run(&a, raw),
        Command::PoissonDemo(a) => poisson::run(&a, raw),
        Command::Eta(a) => eta::run(&a, raw),
        Command::Replay(a) => replay::run(&a),
    }
}

/// Drops `--out`/`--force` and pins the seed so a replay does not depend on
/// the environment.
pub(crate) fn recorded_argv(raw: &[String], seed: Option<u64>) -> Vec<String> {
    let pinned = |a: &str| seed.is_some() && (a == "--seed" || a.starts_with("--seed="));
    let mut out = Vec::new();
    let mut it = raw.iter();
    while let Some(a) = it.next() {
        if a == "--out" || (pinned(a) && a == "--seed") {
            it.next();
        } else if a != "--force" && !a.starts_with("--out=") && !pinned(a) {
            out.push(a.clone());
        }
    }
    if let Some(s) = seed {
        out.push("--seed".into());
        out.push(s.to_string());
    }
    out
}

pub(crate) fn eta_csv(mask: &ResponseIndicator, transform: &Transform) -> CliResult<Vec<u8>> {
    let map = wavesc_core::transform::irregularity_map(mask, transform)?;
    Ok(csv_bytes(
        &["flat_index", "level", "position", "eta_sq"],
        map.rows(transform).into_iter().map(|(i, level, pos, e)| {
            vec![i.to_string(), level.to_string(), pos.to_string(), num(e)]
        }),
    ))
}

pub(crate) fn wavelet_json(w: &WaveletSpec) -> serde_json::Value {
    serde_json::json!({ "name": w.name(), "primary_level": w.primary_level })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn argv_is_stripped_and_seeded() {
        let raw = s(&[
            "--input", "a.csv", "--out", "o", "--force", "--seed", "3", "--M", "5",
        ]);
        assert_eq!(
            recorded_argv(&raw, Some(3)),
            s(&["--input", "a.csv", "--M", "5", "--seed", "3"])
        );
        assert_eq!(
            recorded_argv(&s(&["--out=o", "--mask", "m"]), None),
            s(&["--mask", "m"])
        );
    }
}
