//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 when parameter selection fails (the swept
//! tables are still written), 1 for configuration, I/O and domain errors.

pub mod config;
pub mod io;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
use crate::fodesolver::{solve, verify_linking};
use crate::fraccalc::{caputo_l1, SampledFunction};
use crate::orderest::run_pipeline;
use crate::tables::{configured_threads, table_sweep, TableId, TableRow};

pub use config::{load_experiment, load_fode, ExperimentConfig, FodeConfig, ResolvedRun};

pub const TABLE_HEADER: [&str; 5] = ["nu_true", "noise", "epsilon", "nu_ratio", "nu_log"];
pub const TABLE_DIFF_HEADER: [&str; 9] = [
    "nu_true", "noise", "epsilon", "nu_ratio", "ref_ratio", "delta_ratio", "nu_log", "ref_log", "delta_log",
];

/// Agreement bounds used in the table summary.
pub const RATIO_TOLERANCE: f64 = 0.02;
pub const LOG_TOLERANCE: f64 = 0.03;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_SELECTION: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fracorder", version, about = "Leading-order recovery for fractional operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one estimation from a JSON config.
    Estimate {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `out_dir` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate a reference table and diff it against the reference values.
    Table {
        #[arg(long)]
        id: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// L1 Caputo derivative of a two-column CSV.
    Caputo {
        #[arg(long)]
        nu: f64,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve a fractional Cauchy problem from a JSON config.
    Fode {
        #[arg(long)]
        config: PathBuf,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Selection(_) | Error::SelectionWithDiagnostics { .. } => EXIT_SELECTION,
        _ => EXIT_ERROR,
    }
}

fn write_out(out: &mut dyn Write, line: String) -> Result<()> {
    writeln!(out, "{line}").map_err(|source| Error::Io {
        path: "<stdout>".into(),
        source,
    })
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.display().to_string(),
        source,
    })
}

/// Writes `observation.csv` (+ sidecar), `diagnostics.csv` and `report.json`
/// under the output directory.
pub fn cmd_estimate(config_path: &Path, out_dir: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    let cfg = load_experiment(config_path)?;
    let base = config::config_base(config_path);
    let dir = match (out_dir, &cfg.out_dir) {
        (Some(d), _) => d.to_path_buf(),
        (None, Some(d)) => base.join(d),
        (None, None) => PathBuf::from("."),
    };
    let run = cfg.resolve(&base)?;
    ensure_dir(&dir)?;
    io::write_observation(&run.observation, &dir.join("observation.csv"))?;
    match run_pipeline(&run.observation, &run.basis, &run.grids, &run.fdo, run.options) {
        Ok(report) => {
            io::write_diagnostics(&report.diagnostics, &dir.join("diagnostics.csv"))?;
            io::write_json(&dir.join("report.json"), &report)?;
            write_out(
                out,
                format!(
                    "nu_ratio={:.6} nu_log={:.6} lambda={:e} that={:e}",
                    report.nu_ratio(),
                    report.nu_log(),
                    report.ratio.lambda,
                    report.ratio.that
                ),
            )
        }
        Err(Error::SelectionWithDiagnostics { message, diagnostics }) => {
            io::write_diagnostics(&diagnostics, &dir.join("diagnostics.csv"))?;
            Err(Error::SelectionWithDiagnostics { message, diagnostics })
        }
        Err(e) => Err(e),
    }
}

/// `table1.csv` → `table1.diff.csv`.
pub fn diff_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.diff.csv"))
}

fn table_rows(rows: &[TableRow]) -> Vec<[String; 5]> {
    rows.iter()
        .map(|r| {
            [
                r.nu_true.to_string(),
                r.noise.label().to_string(),
                r.epsilon.to_string(),
                io::fmt_opt(r.nu_ratio),
                io::fmt_opt(r.nu_log),
            ]
        })
        .collect()
}

fn diff_rows(rows: &[TableRow]) -> Vec<[String; 9]> {
    let f4 = |v: Option<f64>| v.map(|x| format!("{x:.4}")).unwrap_or_default();
    let delta = |v: Option<f64>, r: f64| v.map(|x| format!("{:+.4}", x - r)).unwrap_or_default();
    rows.iter()
        .map(|r| {
            [
                r.nu_true.to_string(),
                r.noise.label().to_string(),
                r.epsilon.to_string(),
                f4(r.nu_ratio),
                format!("{:.4}", r.ref_ratio),
                delta(r.nu_ratio, r.ref_ratio),
                f4(r.nu_log),
                format!("{:.4}", r.ref_log),
                delta(r.nu_log, r.ref_log),
            ]
        })
        .collect()
}

fn within(v: Option<f64>, r: f64, tol: f64) -> bool {
    v.is_some_and(|x| (x - r).abs() <= tol)
}

pub fn cmd_table(id: u32, out_path: &Path, out: &mut dyn Write) -> Result<()> {
    let id = TableId::from_number(id)?;
    let rows = table_sweep(id, crate::orderest::PipelineOptions::table_presets(), configured_threads()?)?;
    io::write_csv(out_path, &TABLE_HEADER, &table_rows(&rows))?;
    io::write_csv(&diff_path(out_path), &TABLE_DIFF_HEADER, &diff_rows(&rows))?;
    let ratio_ok = rows.iter().filter(|r| within(r.nu_ratio, r.ref_ratio, RATIO_TOLERANCE)).count();
    let log_ok = rows.iter().filter(|r| within(r.nu_log, r.ref_log, LOG_TOLERANCE)).count();
    write_out(
        out,
        format!(
            "table {}: {} rows, ratio within {RATIO_TOLERANCE}: {ratio_ok}/{n}, log within {LOG_TOLERANCE}: {log_ok}/{n}",
            id.number(),
            rows.len(),
            n = rows.len()
        ),
    )
}

pub fn cmd_caputo(nu: f64, input: &Path, output: &Path) -> Result<()> {
    let (t, v, names) = io::read_two_columns(input)?;
    let f = SampledFunction::new(t, v)?;
    let d = caputo_l1(&f, nu)?;
    let rows: Vec<[String; 2]> = d
        .times()
        .iter()
        .zip(d.values())
        .map(|(t, v)| [t.to_string(), v.to_string()])
        .collect();
    io::write_csv(output, &[names[0].as_str(), names[1].as_str()], &rows)
}

pub fn cmd_fode(config_path: &Path, out: &mut dyn Write) -> Result<()> {
    let cfg = load_fode(config_path)?;
    let base = config::config_base(config_path);
    let problem = cfg.problem(&base)?;
    let sol = solve(&problem, cfg.step)?;
    let path = base.join(cfg.out.clone().unwrap_or_else(|| PathBuf::from("solution.csv")));
    let rows: Vec<[String; 2]> = sol
        .times()
        .iter()
        .zip(sol.values())
        .map(|(t, v)| [t.to_string(), v.to_string()])
        .collect();
    io::write_csv(&path, &io::SOLUTION_HEADER, &rows)?;
    let n = sol.values().len() - 1;
    let max_it = sol.iterations().iter().max().copied().unwrap_or(0);
    write_out(
        out,
        format!("steps={n} v_end={:.6} max_iterations={max_it}", sol.values()[n]),
    )?;
    if cfg.verify_linking {
        let nu = verify_linking(&sol, &problem)?;
        write_out(out, format!("nu_recovered={nu:.6} nu_true={}", problem.fdo().leading_order()))?;
    }
    Ok(())
}

pub fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Estimate { config, out: dir } => cmd_estimate(&config, dir.as_deref(), out),
        Command::Table { id, out: path } => cmd_table(id, &path, out),
        Command::Caputo { nu, input, out: path } => cmd_caputo(nu, &input, &path),
        Command::Fode { config } => cmd_fode(&config, out),
    }
}

/// Parses `args`, runs the command and returns the exit code. Errors go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_ERROR;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match dispatch(cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
