// SPDX-License-Identifier: MIT OR Apache-2.0

use wavesc_core::{Grid, ResponseIndicator, Transform};

use super::{eta_csv, recorded_argv, wavelet_json};
use crate::args::Eta;
use crate::config::parse_wavelet;
use crate::error::{CliError, CliResult};
use crate::io::{parse_pgm, parse_series, read_bytes};
use crate::output::Staged;

pub fn run(a: &Eta, raw: &[String]) -> CliResult<()> {
    let mut staged = Staged::new(&a.output.out, a.output.force)?;
    let wavelet = parse_wavelet(&a.wavelet.wavelet, a.wavelet.primary_level)?;
    let (grid, observed) = match (&a.input, &a.mask) {
        (Some(path), _) => {
            let bytes = read_bytes(path)?;
            staged.input(path, &bytes);
            let s = parse_series(&bytes, &path.display().to_string())?;
            (Grid::Line(s.observed.len()), s.observed)
        }
        (None, Some(path)) => {
            let bytes = read_bytes(path)?;
            staged.input(path, &bytes);
            let m = parse_pgm(&bytes, &path.display().to_string())?;
            if m.width != m.height {
                return Err(CliError::input(format!(
                    "mask is {}x{}; a square mask is required",
                    m.width, m.height
                )));
            }
            (
                Grid::Square(m.width),
                m.pixels.iter().map(|&v| v != 0.0).collect(),
            )
        }
        (None, None) => return Err(CliError::input("pass --input or --mask")),
    };
    let transform = Transform::new(wavelet, grid)?;
    let mask = ResponseIndicator::new(observed);
    staged.add("eta.csv", eta_csv(&mask, &transform)?);
    let config = serde_json::json!({
        "wavelet": wavelet_json(&wavelet),
        "grid": grid,
        "n_missing": mask.n_missing(),
    });
    staged.commit("eta", recorded_argv(raw, None), config, None)?;
    Ok(())
}
