//! Ready-made estimation runs for the two reference scenarios.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::obsmodel::{
    example71_observation, example72_observation, FdoDescriptor, FdoKind, GridPreset, NoiseSpec, Observation, TimeGrid,
};
use crate::orderest::{run_pipeline, EstimateReport, PipelineOptions, RegGrids};
use crate::regbasis::BasisSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Local observation `t^ν₀/Γ(1+ν₀)` on the gapped grid.
    Example71,
    /// Nonlocal observation `(256/225)(2 + t^ν₀)` on the uniform grid.
    Example72,
}

impl Scenario {
    pub fn grid_preset(self) -> GridPreset {
        match self {
            Scenario::Example71 => GridPreset::Nonuniform71,
            Scenario::Example72 => GridPreset::Uniform72,
        }
    }

    /// The order the default power exponents are scaled from.
    pub fn reference_order(self, nu0: f64) -> f64 {
        match self {
            Scenario::Example71 => nu0 / 2.0,
            Scenario::Example72 => nu0 / 5.0,
        }
    }

    /// Synthetic observation on `grid`; the second scenario only has a
    /// first-kind operator and ignores `kind`.
    pub fn observation(self, nu0: f64, kind: FdoKind, noise: NoiseSpec, grid: TimeGrid) -> Result<Observation> {
        match self {
            Scenario::Example71 => example71_observation(nu0, kind, noise, grid),
            Scenario::Example72 => example72_observation(nu0, noise, grid),
        }
    }
}

/// All inputs of one estimation run.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetRun {
    pub observation: Observation,
    pub basis: BasisSpec,
    pub grids: RegGrids,
    pub fdo: FdoDescriptor,
}

impl PresetRun {
    /// Default grid, basis and parameter grids for the scenario.
    pub fn new(scenario: Scenario, nu0: f64, kind: FdoKind, noise: NoiseSpec) -> Result<Self> {
        let grid = TimeGrid::preset(scenario.grid_preset());
        let t_k = grid.last();
        let observation = scenario.observation(nu0, kind, noise, grid)?;
        let fdo = observation.meta().fdo.clone().expect("synthetic observations carry their operator");
        Ok(Self {
            basis: BasisSpec::with_reference_order(scenario.reference_order(nu0), t_k)?,
            grids: RegGrids::standard(t_k),
            observation,
            fdo,
        })
    }

    pub fn run(&self, options: PipelineOptions) -> Result<EstimateReport> {
        run_pipeline(&self.observation, &self.basis, &self.grids, &self.fdo, options)
    }
}
