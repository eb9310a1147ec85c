use serde::{Deserialize, Serialize};

use super::estimators::{log_estimate, ratio_estimate};
use super::selection::{select, EstimateTable, Selection, ThatCriterion};
use crate::error::{Error, Result};
use crate::obsmodel::{FdoDescriptor, Observation};
use crate::regbasis::BasisSpec;
use crate::tikhonov::Fitter;

/// The geometric sequences `λ_i = λ₁ ξ₁^{i−1}` (`i = 1..K₁`) and
/// `t̂_j = t̂₁ ξ₂^{j−1}` (`j = 1..K₂`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegGrids {
    pub lambda1: f64,
    pub xi1: f64,
    pub k1: usize,
    pub that1: f64,
    pub xi2: f64,
    pub k2: usize,
}

impl RegGrids {
    pub fn new(lambda1: f64, xi1: f64, k1: usize, that1: f64, xi2: f64, k2: usize) -> Result<Self> {
        let g = Self {
            lambda1,
            xi1,
            k1,
            that1,
            xi2,
            k2,
        };
        g.validate()?;
        Ok(g)
    }

    /// `λ_i = 2^{1−i}`, `i = 1..60`; `t̂_j = 2^{1−j} t_K`, `j = 1..15`.
    pub fn standard(t_k: f64) -> Self {
        Self {
            lambda1: 1.0,
            xi1: 0.5,
            k1: 60,
            that1: t_k,
            xi2: 0.5,
            k2: 15,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda1 > 0.0 && self.lambda1.is_finite()) {
            return Err(Error::invalid("grids", format!("lambda1 = {} must be positive", self.lambda1)));
        }
        for (name, xi) in [("xi1", self.xi1), ("xi2", self.xi2)] {
            if !(xi > 0.0 && xi < 1.0) {
                return Err(Error::invalid("grids", format!("{name} = {xi} must lie in (0, 1)")));
            }
        }
        if self.k1 < 2 || self.k2 < 2 {
            return Err(Error::invalid("grids", format!("k1 = {}, k2 = {} must both be >= 2", self.k1, self.k2)));
        }
        if !(self.that1 > 0.0 && self.that1 < 1.0) {
            return Err(Error::invalid("grids", format!("that1 = {} must lie in (0, 1)", self.that1)));
        }
        Ok(())
    }

    pub fn lambdas(&self) -> Vec<f64> {
        (0..self.k1).map(|i| self.lambda1 * self.xi1.powi(i as i32)).collect()
    }

    pub fn thats(&self) -> Vec<f64> {
        (0..self.k2).map(|j| self.that1 * self.xi2.powi(j as i32)).collect()
    }
}

/// Whether the logarithmic estimate gets its own parameter selection or
/// reads its table at the cell chosen for the ratio estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogSelection {
    #[default]
    Independent,
    ReuseRatio,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineOptions {
    #[serde(default)]
    pub log_selection: LogSelection,
    #[serde(default)]
    pub that_criterion: ThatCriterion,
}

impl PipelineOptions {
    /// The settings used to reproduce the reference tables.
    pub fn table_presets() -> Self {
        Self {
            log_selection: LogSelection::ReuseRatio,
            that_criterion: ThatCriterion::SweepStability,
        }
    }
}

/// Both estimate tables with their parameter grids.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub lambdas: Vec<f64>,
    pub thats: Vec<f64>,
    pub ratio: EstimateTable,
    pub log: EstimateTable,
}

/// One row per cell, in the order `(i, j)` with `j` fastest; indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticRow {
    pub i: usize,
    pub j: usize,
    pub lambda: f64,
    pub that: f64,
    pub nu_ratio: Option<f64>,
    pub nu_log: Option<f64>,
}

impl DiagnosticRow {
    pub fn flag(&self) -> &'static str {
        match (self.nu_ratio.is_some(), self.nu_log.is_some()) {
            (true, true) => "ok",
            (false, true) => "ratio_failed",
            (true, false) => "log_failed",
            (false, false) => "both_failed",
        }
    }
}

impl Diagnostics {
    pub fn rows(&self) -> Vec<DiagnosticRow> {
        let mut out = Vec::with_capacity(self.lambdas.len() * self.thats.len());
        for (i, &lambda) in self.lambdas.iter().enumerate() {
            for (j, &that) in self.thats.iter().enumerate() {
                out.push(DiagnosticRow {
                    i: i + 1,
                    j: j + 1,
                    lambda,
                    that,
                    nu_ratio: self.ratio.get(i, j),
                    nu_log: self.log.get(i, j),
                });
            }
        }
        out
    }
}

/// A selected estimate; `i` and `j` are 1-based grid indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectedEstimate {
    pub nu: f64,
    pub i: usize,
    pub j: usize,
    pub lambda: f64,
    pub that: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub ratio: SelectedEstimate,
    pub log: SelectedEstimate,
    pub options: PipelineOptions,
    #[serde(skip)]
    pub diagnostics: Diagnostics,
}

impl EstimateReport {
    pub fn nu_ratio(&self) -> f64 {
        self.ratio.nu
    }

    pub fn nu_log(&self) -> f64 {
        self.log.nu
    }
}

/// Fills both estimate tables over the parameter grids; one fit per `λ`.
pub fn sweep(obs: &Observation, spec: &BasisSpec, grids: &RegGrids, fdo: &FdoDescriptor) -> Result<Diagnostics> {
    grids.validate()?;
    if grids.that1 > spec.t_k {
        return Err(Error::invalid(
            "grids",
            format!("that1 = {} exceeds the basis endpoint {}", grids.that1, spec.t_k),
        ));
    }
    let fitter = Fitter::new(obs, spec)?;
    let lambdas = grids.lambdas();
    let thats = grids.thats();
    let psi0 = obs.psi0();
    let mut ratio = Vec::with_capacity(lambdas.len() * thats.len());
    let mut log = Vec::with_capacity(ratio.capacity());
    for &lambda in &lambdas {
        let model = fitter.fit(lambda)?;
        for &that in &thats {
            ratio.push(ratio_estimate(&model, psi0, fdo, that).ok());
            log.push(log_estimate(&model, psi0, fdo, that).ok());
        }
    }
    Ok(Diagnostics {
        ratio: EstimateTable::new(lambdas.len(), thats.len(), ratio)?,
        log: EstimateTable::new(lambdas.len(), thats.len(), log)?,
        lambdas,
        thats,
    })
}

fn selected(table: &EstimateTable, s: Selection, d: &Diagnostics) -> Result<SelectedEstimate> {
    let nu = table
        .get(s.i, s.j)
        .ok_or_else(|| Error::Selection(format!("selected cell ({}, {}) has no estimate", s.i + 1, s.j + 1)))?;
    Ok(SelectedEstimate {
        nu,
        i: s.i + 1,
        j: s.j + 1,
        lambda: d.lambdas[s.i],
        that: d.thats[s.j],
    })
}

fn choose(d: &Diagnostics, options: PipelineOptions) -> Result<(SelectedEstimate, SelectedEstimate)> {
    let rs = select(&d.ratio, options.that_criterion)?;
    let ls = match options.log_selection {
        LogSelection::Independent => select(&d.log, options.that_criterion)?,
        LogSelection::ReuseRatio => rs,
    };
    Ok((selected(&d.ratio, rs, d)?, selected(&d.log, ls, d)?))
}

/// Sweeps the grids, selects parameters and reports both estimates. On a
/// selection failure the error keeps the swept tables.
pub fn run_pipeline(
    obs: &Observation,
    spec: &BasisSpec,
    grids: &RegGrids,
    fdo: &FdoDescriptor,
    options: PipelineOptions,
) -> Result<EstimateReport> {
    let diagnostics = sweep(obs, spec, grids, fdo)?;
    match choose(&diagnostics, options) {
        Ok((ratio, log)) => Ok(EstimateReport {
            ratio,
            log,
            options,
            diagnostics,
        }),
        Err(Error::Selection(message)) => Err(Error::SelectionWithDiagnostics {
            message,
            diagnostics: Box::new(diagnostics),
        }),
        Err(e) => Err(e),
    }
}
