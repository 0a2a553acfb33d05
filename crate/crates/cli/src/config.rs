// SPDX-License-Identifier: MIT OR Apache-2.0

//! Flag values and scenario files turned into core configuration.

use std::collections::BTreeMap;
use std::str::FromStr;

use wavesc_core::bench::{AlgorithmId, MissingKind, Scenario, Signal, TestFunction};
use wavesc_core::selfcon::{EtaMode, Interpolation, SelfConConfig};
use wavesc_core::shrinkage::{ThresholdOperator, ThresholdPolicy, ThresholdSelector};
use wavesc_core::WaveletSpec;

use crate::args::{Algo, Estimator, Interp, Kind, Operator};
use crate::error::{CliError, CliResult};

/// `haar` or `db<v>`.
pub fn parse_wavelet(name: &str, primary_level: u32) -> CliResult<WaveletSpec> {
    let name = name.trim().to_ascii_lowercase();
    if name == "haar" {
        return Ok(WaveletSpec::haar(primary_level));
    }
    let v = name
        .strip_prefix("db")
        .and_then(|v| v.parse::<u8>().ok())
        .filter(|v| (1..=10).contains(v))
        .ok_or_else(|| CliError::input(format!("unknown wavelet `{name}` (haar or db1..db10)")))?;
    Ok(WaveletSpec::daubechies(v, primary_level))
}

/// `universal`, `adjusted` or `fixed=<c>`.
pub fn parse_threshold(rule: &str, operator: Operator) -> CliResult<ThresholdPolicy> {
    let rule = rule.trim().to_ascii_lowercase();
    let selector = match rule.as_str() {
        "universal" => ThresholdSelector::Universal,
        "adjusted" => ThresholdSelector::Adjusted,
        other => {
            let c = other
                .strip_prefix("fixed=")
                .and_then(|c| c.parse::<f64>().ok())
                .filter(|c| c.is_finite() && *c >= 0.0)
                .ok_or_else(|| {
                    CliError::input(format!(
                        "unknown threshold `{other}` (universal, adjusted or fixed=<c>)"
                    ))
                })?;
            ThresholdSelector::Fixed(c)
        }
    };
    let operator = match operator {
        Operator::Hard => ThresholdOperator::Hard,
        Operator::Soft => ThresholdOperator::Soft,
    };
    Ok(ThresholdPolicy::new(selector, operator))
}

pub fn missing_kind(kind: Kind) -> MissingKind {
    match kind {
        Kind::Random => MissingKind::Random,
        Kind::Clustered => MissingKind::Clustered,
    }
}

pub fn check_fraction(missing: f64) -> CliResult<f64> {
    if (0.0..1.0).contains(&missing) {
        Ok(missing)
    } else {
        Err(CliError::input(format!(
            "missing fraction {missing} outside [0, 1)"
        )))
    }
}

/// Engine configuration for the estimator flags.
pub fn selfcon_config(est: &Estimator) -> CliResult<SelfConConfig> {
    let config = SelfConConfig {
        wavelet: parse_wavelet(&est.wavelet.wavelet, est.wavelet.primary_level)?,
        policy: parse_threshold(&est.threshold.threshold, est.threshold.operator)?,
        epsilon: est.epsilon,
        max_iterations: est.max_iter,
        imputations: est.m,
        eta_mode: if est.algo == Algo::Refa {
            EtaMode::Average
        } else {
            EtaMode::Exact
        },
        interpolation: match est.interp {
            Interp::None => Interpolation::None,
            Interp::Linear => Interpolation::Linear,
        },
        seed: est.seed,
        ..SelfConConfig::default()
    };
    config.validate()?;
    Ok(config)
}

/// A test function name or `synthetic-image`.
pub fn parse_signal(name: &str) -> CliResult<Signal> {
    let key = name.trim().to_ascii_lowercase();
    if key == "synthetic-image" || key == "image" {
        return Ok(Signal::SyntheticImage);
    }
    TestFunction::from_str(&key)
        .map(Signal::Function)
        .map_err(|_| {
            CliError::input(format!(
                "unknown function `{name}` (blocks, bumps, heavisine, doppler, synthetic-image)"
            ))
        })
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_kv(text: &str, name: &str) -> CliResult<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::input(format!("{name}:{}: expected `key = value`", no + 1)))?;
        let k = k.trim();
        if !SCENARIO_KEYS.contains(&k) {
            return Err(CliError::input(format!(
                "{name}:{}: unknown key `{k}` (known: {})",
                no + 1,
                SCENARIO_KEYS.join(", ")
            )));
        }
        map.insert(k.to_string(), v.trim().to_string());
    }
    Ok(map)
}

pub const SCENARIO_KEYS: [&str; 16] = [
    "function",
    "n",
    "snr",
    "missing",
    "kind",
    "algorithms",
    "replicates",
    "seed",
    "threshold",
    "operator",
    "wavelet",
    "primary_level",
    "M",
    "epsilon",
    "max_iter",
    "alpha",
];

fn value<T: FromStr>(map: &BTreeMap<String, String>, key: &str) -> CliResult<Option<T>> {
    map.get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|_| CliError::input(format!("bad value `{v}` for `{key}`")))
        })
        .transpose()
}

/// Builds a scenario from merged `key = value` settings over the defaults.
pub fn scenario_from(map: &BTreeMap<String, String>) -> CliResult<Scenario> {
    let mut s = Scenario::default();
    if let Some(f) = map.get("function") {
        s.signal = parse_signal(f)?;
        if s.signal == Signal::SyntheticImage && !map.contains_key("algorithms") {
            s.algorithms.retain(|a| !a.interpolates());
        }
    }
    if let Some(n) = value(map, "n")? {
        s.n = n;
    }
    if let Some(snr) = value::<f64>(map, "snr")? {
        if !(snr > 0.0 && snr.is_finite()) {
            return Err(CliError::input(format!("snr must be positive, got {snr}")));
        }
        s.snr = snr;
    }
    if let Some(m) = value(map, "missing")? {
        s.missing_fraction = check_fraction(m)?;
    }
    if let Some(k) = map.get("kind") {
        s.missing_kind = match k.to_ascii_lowercase().as_str() {
            "random" => MissingKind::Random,
            "clustered" => MissingKind::Clustered,
            other => return Err(CliError::input(format!("unknown missing kind `{other}`"))),
        };
    }
    if let Some(list) = map.get("algorithms") {
        s.algorithms = list
            .split(',')
            .filter(|a| !a.trim().is_empty())
            .map(|a| AlgorithmId::from_str(a).map_err(|e| CliError::input(e.to_string())))
            .collect::<CliResult<_>>()?;
        s.algorithms.sort();
        s.algorithms.dedup();
    }
    if let Some(r) = value(map, "replicates")? {
        s.replicates = r;
    }
    if let Some(seed) = value(map, "seed")? {
        s.seed = seed;
    }
    let operator = match map.get("operator").map(|o| o.to_ascii_lowercase()) {
        None => Operator::Hard,
        Some(o) if o == "hard" => Operator::Hard,
        Some(o) if o == "soft" => Operator::Soft,
        Some(o) => return Err(CliError::input(format!("unknown operator `{o}`"))),
    };
    s.policy = parse_threshold(
        map.get("threshold").map_or("universal", String::as_str),
        operator,
    )?;
    let level = value(map, "primary_level")?.unwrap_or(s.wavelet.primary_level);
    s.wavelet = parse_wavelet(map.get("wavelet").map_or("db5", String::as_str), level)?;
    if let Some(m) = value(map, "M")? {
        s.imputations = m;
    }
    if let Some(e) = value(map, "epsilon")? {
        s.epsilon = e;
    }
    if let Some(it) = value(map, "max_iter")? {
        s.max_iterations = it;
    }
    if let Some(a) = value(map, "alpha")? {
        s.alpha = a;
    }
    s.validate()?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavelet_and_threshold_names() {
        assert_eq!(parse_wavelet("haar", 0).unwrap(), WaveletSpec::haar(0));
        assert_eq!(parse_wavelet("DB5", 3).unwrap(), WaveletSpec::d5());
        assert!(parse_wavelet("db11", 3).is_err());
        assert!(parse_wavelet("sym4", 3).is_err());
        assert_eq!(
            parse_threshold("fixed=1.5", Operator::Soft).unwrap(),
            ThresholdPolicy::new(ThresholdSelector::Fixed(1.5), ThresholdOperator::Soft)
        );
        assert!(parse_threshold("fixed=-1", Operator::Hard).is_err());
        assert!(parse_threshold("sure", Operator::Hard).is_err());
    }

    #[test]
    fn scenario_file() {
        let map = parse_kv(
            "# demo\nfunction = doppler\nn = 256\nalgorithms = refa, sim ,unicomp\nM=20\n",
            "t",
        )
        .unwrap();
        let s = scenario_from(&map).unwrap();
        assert_eq!(s.signal, Signal::Function(TestFunction::Doppler));
        assert_eq!(s.n, 256);
        assert_eq!(s.imputations, 20);
        assert_eq!(
            s.algorithms,
            vec![AlgorithmId::Sim, AlgorithmId::RefA, AlgorithmId::UniComp]
        );
        assert!(parse_kv("bogus = 1\n", "t").is_err());
        assert!(parse_kv("n 256\n", "t").is_err());
        let mut bad = BTreeMap::new();
        bad.insert("n".to_string(), "100".to_string());
        assert!(scenario_from(&bad).is_err());
    }
}
