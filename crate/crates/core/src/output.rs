//! CSV tables and JSON manifests for sweep results.
//!
//! Floats are written with nine significant digits in the style of C's
//! `%.9g`, so a rerun with the same inputs reproduces the file byte for byte.

use serde::Serialize;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::experiments::{SweepManifest, SweepResult, VERSION};

pub const TOOL_NAME: &str = "cohtrap";

/// `%.9g` formatting: fixed notation for decimal exponents in [−4, 9),
/// scientific otherwise, trailing zeros removed.
pub fn format_g9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(format_g9).unwrap_or_default()
}

pub fn csv_header(result: &SweepResult) -> Vec<String> {
    let mut h: Vec<String> = result.axes.iter().map(|a| a.name.to_string()).collect();
    h.push("c_stationary".into());
    h.push("l1_stationary".into());
    if result.has_excess() {
        h.push("c_excess".into());
    }
    if result.has_qsl() {
        h.push("t_c".into());
        h.push("qsl_ratio".into());
    }
    h.push("error_code".into());
    h
}

/// Writes the table as RFC-4180 CSV with a header row and LF line endings.
pub fn write_csv<W: Write>(result: &SweepResult, out: W) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(csv_header(result))?;
    let (excess, qsl) = (result.has_excess(), result.has_qsl());
    for row in &result.rows {
        let mut rec: Vec<String> = row.coords.iter().map(|v| format_g9(*v)).collect();
        rec.push(cell(row.c_stationary));
        rec.push(cell(row.l1_stationary));
        if excess {
            rec.push(cell(row.c_excess));
        }
        if qsl {
            rec.push(cell(row.t_c));
            rec.push(cell(row.qsl_ratio));
        }
        rec.push(row.error_code.clone().unwrap_or_default());
        w.write_record(&rec)?;
    }
    w.flush()
}

/// Writes the rows as a JSON array of objects keyed like the CSV header.
pub fn write_json<W: Write>(result: &SweepResult, out: W) -> io::Result<()> {
    let header = csv_header(result);
    let (excess, qsl) = (result.has_excess(), result.has_qsl());
    let rows: Vec<serde_json::Map<String, serde_json::Value>> = result
        .rows
        .iter()
        .map(|row| {
            let mut vals: Vec<serde_json::Value> = row.coords.iter().map(|v| (*v).into()).collect();
            vals.push(row.c_stationary.into());
            vals.push(row.l1_stationary.into());
            if excess {
                vals.push(row.c_excess.into());
            }
            if qsl {
                vals.push(row.t_c.into());
                vals.push(row.qsl_ratio.into());
            }
            vals.push(row.error_code.clone().into());
            header.iter().cloned().zip(vals).collect()
        })
        .collect();
    let mut out = out;
    serde_json::to_writer_pretty(&mut out, &rows)?;
    out.write_all(b"\n")
}

/// Top-level manifest document. `config` echoes the run configuration and
/// can be fed back to the CLI with `--config`.
#[derive(Debug, Serialize)]
pub struct ManifestDoc<'a, C: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub data_file: String,
    pub columns: Vec<String>,
    pub config: &'a C,
    pub run: &'a SweepManifest,
}

/// `<dir>/<stem>.manifest.json` next to `data_path`.
pub fn manifest_path(data_path: &Path) -> PathBuf {
    let stem = data_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    data_path.with_file_name(format!("{stem}.manifest.json"))
}

pub fn write_manifest<C: Serialize>(
    data_path: &Path,
    config: &C,
    result: &SweepResult,
) -> io::Result<PathBuf> {
    let doc = ManifestDoc {
        tool: TOOL_NAME,
        version: VERSION,
        data_file: data_path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
        columns: csv_header(result),
        config,
        run: &result.manifest,
    };
    let path = manifest_path(data_path);
    let mut w = BufWriter::new(File::create(&path)?);
    serde_json::to_writer_pretty(&mut w, &doc)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(path)
}
