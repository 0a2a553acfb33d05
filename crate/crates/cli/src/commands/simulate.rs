// SPDX-License-Identifier: MIT OR Apache-2.0

use wavesc_core::bench::{Scenario, Signal};

use super::recorded_argv;
use crate::args::Simulate;
use crate::config::{check_fraction, missing_kind, parse_signal};
use crate::error::{CliError, CliResult};
use crate::io::{csv_bytes, num, pgm_bytes};
use crate::output::Staged;

const PGM16: f64 = 65535.0;

pub fn run(a: &Simulate, raw: &[String]) -> CliResult<()> {
    let mut staged = Staged::new(&a.output.out, a.output.force)?;
    if !(a.snr > 0.0 && a.snr.is_finite()) {
        return Err(CliError::input(format!(
            "snr must be positive, got {}",
            a.snr
        )));
    }
    let scenario = Scenario {
        signal: parse_signal(&a.function)?,
        n: a.n,
        snr: a.snr,
        missing_fraction: check_fraction(a.missing)?,
        missing_kind: missing_kind(a.kind),
        replicates: 1,
        seed: a.seed,
        algorithms: vec![wavesc_core::bench::AlgorithmId::UniComp],
        ..Scenario::default()
    };
    scenario.validate()?;
    let data = scenario.replicate_data(0)?;
    let mut config = serde_json::json!({
        "function": scenario.signal.name(),
        "n": a.n,
        "snr": a.snr,
        "missing": a.missing,
        "kind": format!("{:?}", scenario.missing_kind).to_lowercase(),
        "seed": a.seed,
        "sigma": data.sigma,
        "n_missing": data.mask.n_missing(),
    });

    if scenario.signal == Signal::SyntheticImage {
        // Affine map of the value range onto 16-bit samples.
        let (lo, hi) = data
            .y
            .iter()
            .chain(&data.truth)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| {
                (l.min(v), h.max(v))
            });
        let scale = if hi > lo { (hi - lo) / PGM16 } else { 1.0 };
        let to_px = |v: &f64| (v - lo) / scale;
        let side = a.n;
        let complete: Vec<f64> = data.y.iter().map(to_px).collect();
        let incomplete: Vec<f64> = complete
            .iter()
            .zip(data.mask.mask())
            .map(|(&v, &o)| if o { v } else { 0.0 })
            .collect();
        let truth: Vec<f64> = data.truth.iter().map(to_px).collect();
        let mask: Vec<f64> = data
            .mask
            .mask()
            .iter()
            .map(|&o| if o { 255.0 } else { 0.0 })
            .collect();
        staged.add("image.pgm", pgm_bytes(side, side, 65535, &incomplete));
        staged.add("complete.pgm", pgm_bytes(side, side, 65535, &complete));
        staged.add("mask.pgm", pgm_bytes(side, side, 255, &mask));
        staged.add("truth.pgm", pgm_bytes(side, side, 65535, &truth));
        config["pgm_offset"] = lo.into();
        config["pgm_scale"] = scale.into();
    } else {
        let n = a.n as f64;
        staged.add(
            "data.csv",
            csv_bytes(
                &["index", "y", "observed"],
                data.y
                    .iter()
                    .zip(data.mask.mask())
                    .enumerate()
                    .map(|(i, (&y, &o))| {
                        let y = if o { num(y) } else { String::new() };
                        vec![i.to_string(), y, u8::from(o).to_string()]
                    }),
            ),
        );
        staged.add(
            "truth.csv",
            csv_bytes(
                &["index", "x", "f"],
                data.truth
                    .iter()
                    .enumerate()
                    .map(|(i, &f)| vec![i.to_string(), num(i as f64 / n), num(f)]),
            ),
        );
    }
    staged.commit(
        "simulate",
        recorded_argv(raw, Some(a.seed)),
        config,
        Some(a.seed),
    )?;
    Ok(())
}
