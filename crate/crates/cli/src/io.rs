// SPDX-License-Identifier: MIT OR Apache-2.0

//! CSV series and PGM images.

use std::fs;
use std::io::Cursor;
use std::path::Path;

use image::codecs::pnm::PnmDecoder;
use image::ImageDecoder;

use crate::error::{CliError, CliResult};

/// A 1D data set on a regular grid; `y` is NaN where unobserved.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub y: Vec<f64>,
    pub observed: Vec<bool>,
}

pub fn read_bytes(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

fn header_matches(headers: &csv::StringRecord, want: &[&str]) -> bool {
    headers.len() == want.len() && headers.iter().zip(want).all(|(h, w)| h.trim() == *w)
}

fn parse_f64(field: &str, what: &str, line: u64) -> CliResult<f64> {
    field
        .trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| CliError::input(format!("line {line}: bad {what} `{field}`")))
}

fn parse_index(field: &str, line: u64) -> CliResult<usize> {
    field
        .trim()
        .parse::<usize>()
        .map_err(|_| CliError::input(format!("line {line}: bad index `{field}`")))
}

/// Rows of `(index, fields…)`, checked to cover `0..N` exactly once.
fn read_indexed(bytes: &[u8], header: &[&str], name: &str) -> CliResult<Vec<csv::StringRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let headers = reader
        .headers()
        .map_err(|e| CliError::input(format!("{name}: {e}")))?
        .clone();
    if !header_matches(&headers, header) {
        return Err(CliError::input(format!(
            "{name}: expected header `{}`, found `{}`",
            header.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows: Vec<Option<csv::StringRecord>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::input(format!("{name}: {e}")))?;
        let line = record.position().map_or(0, |p| p.line());
        let i = parse_index(&record[0], line)?;
        if i >= rows.len() {
            rows.resize(i + 1, None);
        }
        if rows[i].replace(record).is_some() {
            return Err(CliError::input(format!("{name}: index {i} appears twice")));
        }
    }
    if rows.is_empty() {
        return Err(CliError::input(format!("{name}: no data rows")));
    }
    rows.into_iter()
        .enumerate()
        .map(|(i, r)| r.ok_or_else(|| CliError::input(format!("{name}: index {i} is missing"))))
        .collect()
}

/// Parses `index,y,observed` CSV. `y` may be empty on unobserved rows.
pub fn parse_series(bytes: &[u8], name: &str) -> CliResult<Series> {
    let rows = read_indexed(bytes, &["index", "y", "observed"], name)?;
    let mut y = Vec::with_capacity(rows.len());
    let mut observed = Vec::with_capacity(rows.len());
    for r in &rows {
        let line = r.position().map_or(0, |p| p.line());
        let obs = match r[2].trim() {
            "1" => true,
            "0" => false,
            other => {
                return Err(CliError::input(format!(
                    "line {line}: observed must be 0 or 1, got `{other}`"
                )))
            }
        };
        let v = if !obs && r[1].trim().is_empty() {
            f64::NAN
        } else if obs {
            parse_f64(&r[1], "y", line)?
        } else {
            parse_f64(&r[1], "y", line).unwrap_or(f64::NAN)
        };
        y.push(v);
        observed.push(obs);
    }
    Ok(Series { y, observed })
}

/// Parses `index,count` CSV.
pub fn parse_counts(bytes: &[u8], name: &str) -> CliResult<Vec<f64>> {
    let rows = read_indexed(bytes, &["index", "count"], name)?;
    rows.iter()
        .map(|r| {
            let line = r.position().map_or(0, |p| p.line());
            let v = parse_f64(&r[1], "count", line)?;
            if v < 0.0 {
                return Err(CliError::input(format!("line {line}: negative count {v}")));
            }
            Ok(v)
        })
        .collect()
}

/// Serializes rows of string fields under `header`.
pub fn csv_bytes<I, R>(header: &[&str], rows: I) -> Vec<u8>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory write")
}

/// Shortest round-trip decimal form.
pub fn num(v: f64) -> String {
    format!("{v}")
}

pub fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Grayscale image with its sample range.
#[derive(Debug, Clone, PartialEq)]
pub struct Pgm {
    pub width: usize,
    pub height: usize,
    pub maxval: u32,
    pub pixels: Vec<f64>,
}

pub fn parse_pgm(bytes: &[u8], name: &str) -> CliResult<Pgm> {
    let bad = |e: image::ImageError| CliError::input(format!("{name}: {e}"));
    let decoder = PnmDecoder::new(Cursor::new(bytes)).map_err(bad)?;
    let header = decoder
        .header()
        .as_graymap()
        .copied()
        .ok_or_else(|| CliError::input(format!("{name}: not a P2/P5 graymap")))?;
    if header.maxwhite != 255 && header.maxwhite != 65535 {
        return Err(CliError::input(format!(
            "{name}: maxval {} unsupported (use 255 or 65535)",
            header.maxwhite
        )));
    }
    let mut buf = vec![0u8; decoder.total_bytes() as usize];
    decoder.read_image(&mut buf).map_err(bad)?;
    let pixels: Vec<f64> = if header.maxwhite == 255 {
        buf.iter().map(|&b| f64::from(b)).collect()
    } else {
        buf.chunks_exact(2)
            .map(|c| f64::from(u16::from_ne_bytes([c[0], c[1]])))
            .collect()
    };
    Ok(Pgm {
        width: header.width as usize,
        height: header.height as usize,
        maxval: header.maxwhite,
        pixels,
    })
}

/// Binary PGM (P5); values are rounded and clamped to `[0, maxval]`.
/// Written directly because the codec only encodes 8-bit graymaps.
pub fn pgm_bytes(width: usize, height: usize, maxval: u32, values: &[f64]) -> Vec<u8> {
    let mut out = format!("P5\n{width} {height}\n{maxval}\n").into_bytes();
    let quantize = |v: f64| v.round().clamp(0.0, f64::from(maxval));
    if maxval < 256 {
        out.extend(values.iter().map(|&v| quantize(v) as u8));
    } else {
        for &v in values {
            out.extend_from_slice(&(quantize(v) as u16).to_be_bytes());
        }
    }
    out
}
