//! CSV and sidecar I/O.
//!
//! Numbers are written with the shortest representation that parses back to
//! the same `f64`, so a write followed by a read is lossless.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::obsmodel::{FdoDescriptor, NoiseSpec, Observation, ObservationMeta, TimeGrid};
use crate::orderest::Diagnostics;

pub const OBSERVATION_HEADER: [&str; 2] = ["t", "psi"];
pub const SOLUTION_HEADER: [&str; 2] = ["t", "v"];
pub const DIAGNOSTICS_HEADER: [&str; 7] = ["i", "j", "lambda", "that", "nu_ratio", "nu_log", "flag"];

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn format_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Format {
        path: path.display().to_string(),
        message: message.into(),
    }
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes `header` and `rows` as LF-terminated CSV.
pub fn write_csv<R: AsRef<[String]>>(path: &Path, header: &[&str], rows: &[R]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| format_err(path, e.to_string()))?;
    let wrap = |e: csv::Error| format_err(path, e.to_string());
    w.write_record(header).map_err(wrap)?;
    for r in rows {
        w.write_record(r.as_ref()).map_err(wrap)?;
    }
    w.flush().map_err(io_err(path))
}

/// Reads a two-column numeric CSV with a header row.
pub fn read_two_columns(path: &Path) -> Result<(Vec<f64>, Vec<f64>, [String; 2])> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let header = r.headers().map_err(|e| format_err(path, e.to_string()))?.clone();
    if header.len() != 2 {
        return Err(format_err(path, format!("expected 2 columns, found {}", header.len())));
    }
    let names = [header[0].to_string(), header[1].to_string()];
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| format_err(path, e.to_string()))?;
        let parse = |k: usize| {
            rec.get(k)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| format_err(path, format!("row {}: column `{}` is not a number", line + 1, names[k])))
        };
        a.push(parse(0)?);
        b.push(parse(1)?);
    }
    Ok((a, b, names))
}

/// `obs.csv` ↔ `obs.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sidecar {
    pub psi0: f64,
    pub scenario: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu_true: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fdo: Option<FdoDescriptor>,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| format_err(path, e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(io_err(path))
}

/// Writes `t,psi` to `path` and the metadata to its sidecar.
pub fn write_observation(obs: &Observation, path: &Path) -> Result<()> {
    let rows: Vec<[String; 2]> = obs
        .times()
        .iter()
        .zip(obs.values())
        .map(|(t, v)| [t.to_string(), v.to_string()])
        .collect();
    write_csv(path, &OBSERVATION_HEADER, &rows)?;
    let meta = obs.meta().clone();
    write_json(
        &sidecar_path(path),
        &Sidecar {
            psi0: obs.psi0(),
            scenario: meta.scenario,
            nu_true: meta.nu_true,
            noise: meta.noise,
            fdo: meta.fdo,
        },
    )
}

pub fn read_observation(path: &Path) -> Result<Observation> {
    let (t, psi, names) = read_two_columns(path)?;
    if names != OBSERVATION_HEADER {
        return Err(format_err(path, format!("header must be `t,psi`, found `{}`", names.join(","))));
    }
    let side_path = sidecar_path(path);
    let text = fs::read_to_string(&side_path).map_err(io_err(&side_path))?;
    let side: Sidecar = serde_json::from_str(&text).map_err(|e| format_err(&side_path, e.to_string()))?;
    let grid = TimeGrid::new(t).map_err(|e| format_err(path, e.to_string()))?;
    Observation::new(
        grid,
        psi,
        side.psi0,
        ObservationMeta {
            scenario: side.scenario,
            nu_true: side.nu_true,
            noise: side.noise,
            fdo: side.fdo,
        },
    )
}

pub fn write_diagnostics(d: &Diagnostics, path: &Path) -> Result<()> {
    let rows: Vec<[String; 7]> = d
        .rows()
        .iter()
        .map(|r| {
            [
                r.i.to_string(),
                r.j.to_string(),
                r.lambda.to_string(),
                r.that.to_string(),
                fmt_opt(r.nu_ratio),
                fmt_opt(r.nu_log),
                r.flag().to_string(),
            ]
        })
        .collect();
    write_csv(path, &DIAGNOSTICS_HEADER, &rows)
}
