// SPDX-License-Identifier: MIT OR Apache-2.0

use std::time::Instant;

use rayon::prelude::*;
use wavesc_core::bench::{run_algorithm, summarize, MetricRow, Summary};

use super::recorded_argv;
use crate::args::{Bench, Kind, Operator};
use crate::config::{parse_kv, scenario_from};
use crate::error::{CliError, CliResult};
use crate::io::{csv_bytes, num, opt_num, read_bytes};
use crate::output::Staged;

pub fn pool(threads: usize) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::input(format!("thread pool: {e}")))
}

pub fn run(a: &Bench, raw: &[String]) -> CliResult<()> {
    let mut staged = Staged::new(&a.output.out, a.output.force)?;
    let mut settings = match &a.config {
        Some(path) => {
            let bytes = read_bytes(path)?;
            staged.input(path, &bytes);
            let text = String::from_utf8(bytes)
                .map_err(|_| CliError::input(format!("{}: not UTF-8", path.display())))?;
            parse_kv(&text, &path.display().to_string())?
        }
        None => Default::default(),
    };
    let mut set = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            settings.insert(k.to_string(), v);
        }
    };
    set("function", a.function.clone());
    set("n", a.n.map(|v| v.to_string()));
    set("snr", a.snr.map(|v| v.to_string()));
    set("missing", a.missing.map(|v| v.to_string()));
    set(
        "kind",
        a.kind.map(|k| match k {
            Kind::Random => "random".into(),
            Kind::Clustered => "clustered".into(),
        }),
    );
    set("algorithms", a.algorithms.clone());
    set("replicates", a.replicates.map(|v| v.to_string()));
    set("seed", a.seed.map(|v| v.to_string()));
    set("threshold", a.threshold.clone());
    set(
        "operator",
        a.operator.map(|o| match o {
            Operator::Hard => "hard".into(),
            Operator::Soft => "soft".into(),
        }),
    );
    set("wavelet", a.wavelet.clone());
    set("primary_level", a.primary_level.map(|v| v.to_string()));
    set("M", a.m.map(|v| v.to_string()));
    set("epsilon", a.epsilon.map(|v| v.to_string()));
    set("max_iter", a.max_iter.map(|v| v.to_string()));
    set("alpha", a.alpha.map(|v| v.to_string()));
    let scenario = scenario_from(&settings)?;

    let timings = a.timings;
    let rows: Vec<Vec<MetricRow>> = pool(a.threads)?.install(|| {
        (0..scenario.replicates)
            .into_par_iter()
            .map(|r| {
                let data = scenario.replicate_data(r)?;
                scenario
                    .algorithms
                    .par_iter()
                    .map(|&alg| {
                        let start = Instant::now();
                        let mut row = run_algorithm(&scenario, &data, alg)?;
                        if timings {
                            row.runtime_ms = Some(start.elapsed().as_secs_f64() * 1e3);
                        }
                        Ok(row)
                    })
                    .collect::<wavesc_core::Result<Vec<_>>>()
            })
            .collect::<wavesc_core::Result<_>>()
    })?;
    let mut rows: Vec<MetricRow> = rows.into_iter().flatten().collect();
    let summary = summarize(&scenario, &mut rows)?;

    staged.add(
        "metrics.csv",
        csv_bytes(
            &[
                "algorithm",
                "replicate",
                "mse_com",
                "mse_obs",
                "mse_mis",
                "mrss_obs",
                "runtime_ms",
                "iterations",
            ],
            rows.iter().map(|r| {
                vec![
                    r.algorithm.to_string(),
                    r.replicate.to_string(),
                    num(r.mse_com),
                    num(r.mse_obs),
                    opt_num(r.mse_mis),
                    num(r.mrss_obs),
                    opt_num(r.runtime_ms),
                    r.iterations.to_string(),
                ]
            }),
        ),
    );
    staged.add("ranks.csv", ranks_csv(&summary));
    staged.add_json("summary.json", &summary);
    let seed = scenario.seed;
    staged.commit(
        "bench",
        recorded_argv(raw, Some(seed)),
        serde_json::to_value(&scenario).expect("serializable scenario"),
        Some(seed),
    )?;
    if summary.ranks.is_empty() && scenario.replicates < wavesc_core::bench::MIN_REPLICATES {
        eprintln!(
            "note: rank tables need at least {} replicates; ranks.csv is empty",
            wavesc_core::bench::MIN_REPLICATES
        );
    }
    Ok(())
}

fn ranks_csv(summary: &Summary) -> Vec<u8> {
    csv_bytes(
        &["metric", "algorithm", "median", "wins", "rank"],
        summary.ranks.iter().flat_map(|mr| {
            mr.table.entries.iter().map(move |e| {
                vec![
                    mr.metric.name().to_string(),
                    e.name.clone(),
                    num(e.median),
                    e.wins.to_string(),
                    num(e.rank),
                ]
            })
        }),
    )
}
