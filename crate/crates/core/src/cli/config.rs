//! JSON configuration documents for `estimate` and `fode`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::io::{read_observation, read_two_columns};
use crate::error::{Error, Result};
use crate::fodesolver::{solve, FodeProblem, Forcing, Nonlinearity};
use crate::fraccalc::{PowerSum, SampledFunction};
use crate::obsmodel::{noise_value, FdoDescriptor, FdoKind, GridPreset, NoiseSpec, Observation, ObservationMeta, TimeGrid};
use crate::orderest::{LogSelection, PipelineOptions, RegGrids, ThatCriterion};
use crate::presets::Scenario;
use crate::regbasis::{BasisSpec, DEFAULT_MULTIPLES, DEFAULT_RHO, DEFAULT_TOTAL_SIZE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Example71,
    Example72,
    ObservationFile,
    Fode,
}

/// Either a named preset or explicit points.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default)]
    pub preset: Option<GridPreset>,
    #[serde(default)]
    pub points: Option<TimeGrid>,
}

impl GridConfig {
    fn resolve(&self, fallback: GridPreset) -> Result<TimeGrid> {
        match (self.preset, &self.points) {
            (Some(_), Some(_)) => Err(Error::Config("grid: give either `preset` or `points`, not both".into())),
            (Some(p), None) => Ok(TimeGrid::preset(p)),
            (None, Some(g)) => Ok(g.clone()),
            (None, None) => Ok(TimeGrid::preset(fallback)),
        }
    }
}

/// Power exponents are either listed or derived as `multiples · reference_order`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisConfig {
    #[serde(default)]
    pub power_exponents: Option<Vec<f64>>,
    #[serde(default)]
    pub multiples: Option<Vec<f64>>,
    #[serde(default)]
    pub reference_order: Option<f64>,
    #[serde(default)]
    pub total_size: Option<usize>,
    #[serde(default)]
    pub rho: Option<f64>,
}

impl BasisConfig {
    fn resolve(&self, default_reference: Option<f64>, t_k: f64) -> Result<BasisSpec> {
        let exponents = match (&self.power_exponents, &self.multiples) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "basis: give either `power_exponents` or `multiples`, not both".into(),
                ))
            }
            (Some(b), None) => b.clone(),
            (None, multiples) => {
                let reference = self.reference_order.or(default_reference).ok_or_else(|| {
                    Error::Config("basis: `reference_order` or `power_exponents` is required for this scenario".into())
                })?;
                let m = multiples.clone().unwrap_or_else(|| DEFAULT_MULTIPLES.to_vec());
                m.iter().map(|m| m * reference).collect()
            }
        };
        BasisSpec::new(
            exponents,
            self.total_size.unwrap_or(DEFAULT_TOTAL_SIZE),
            self.rho.unwrap_or(DEFAULT_RHO),
            t_k,
        )
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonlinearityKind {
    #[default]
    None,
    #[serde(alias = "sin-damped")]
    SinDamped,
    Polynomial,
}

/// `none`, `sin_damped` (`coeff · sin v`) or `polynomial` (`Σ coeffs[k] v^k`).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonlinearityConfig {
    pub kind: NonlinearityKind,
    #[serde(default)]
    pub coeff: Option<f64>,
    #[serde(default)]
    pub coeffs: Option<Vec<f64>>,
}

impl NonlinearityConfig {
    fn build(&self) -> Result<Nonlinearity> {
        match (self.kind, self.coeff, &self.coeffs) {
            (NonlinearityKind::None, None, None) => Ok(Nonlinearity::none()),
            (NonlinearityKind::SinDamped, Some(c), None) => Ok(Nonlinearity::sin_damped(c)),
            (NonlinearityKind::Polynomial, None, Some(c)) => Ok(Nonlinearity::polynomial(c.clone())),
            (NonlinearityKind::None, ..) => Err(Error::Config("nonlinearity: `none` takes no coefficients".into())),
            (NonlinearityKind::SinDamped, ..) => Err(Error::Config("nonlinearity: `sin_damped` needs `coeff` only".into())),
            (NonlinearityKind::Polynomial, ..) => {
                Err(Error::Config("nonlinearity: `polynomial` needs `coeffs` only".into()))
            }
        }
    }
}

/// A fractional Cauchy problem and how to solve it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FodeConfig {
    pub fdo: FdoDescriptor,
    #[serde(default)]
    pub kernel: PowerSum,
    #[serde(default)]
    pub forcing: Option<PowerSum>,
    /// CSV `t,f` covering `[0, horizon]`.
    #[serde(default)]
    pub forcing_table: Option<PathBuf>,
    #[serde(default)]
    pub nonlinearity: NonlinearityConfig,
    pub v0: f64,
    pub horizon: f64,
    pub step: f64,
    #[serde(default)]
    pub verify_linking: bool,
    /// Solution CSV; defaults to `solution.csv` next to the config.
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl FodeConfig {
    pub fn problem(&self, base: &Path) -> Result<FodeProblem> {
        let forcing = match (&self.forcing, &self.forcing_table) {
            (Some(p), None) => Forcing::Power(p.clone()),
            (None, Some(path)) => {
                let path = base.join(path);
                let (t, f, _) = read_two_columns(&path)?;
                Forcing::Tabulated(SampledFunction::new(t, f)?)
            }
            _ => return Err(Error::Config("fode: give exactly one of `forcing` and `forcing_table`".into())),
        };
        FodeProblem::new(
            self.fdo.clone(),
            self.kernel.clone(),
            forcing,
            self.nonlinearity.build()?,
            self.v0,
            self.horizon,
        )
    }
}

/// One estimation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: ScenarioKind,
    #[serde(default)]
    pub nu_true: Option<f64>,
    #[serde(default)]
    pub fdo_kind: Option<FdoKind>,
    /// Operator handed to the estimators; required for observation files
    /// whose sidecar has none.
    #[serde(default)]
    pub fdo: Option<FdoDescriptor>,
    #[serde(default)]
    pub noise: Option<NoiseSpec>,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub observation: Option<PathBuf>,
    #[serde(default)]
    pub fode: Option<FodeConfig>,
    #[serde(default)]
    pub basis: BasisConfig,
    #[serde(default)]
    pub reg_grids: Option<RegGrids>,
    #[serde(default)]
    pub log_selection: LogSelection,
    #[serde(default)]
    pub that_criterion: ThatCriterion,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

/// Everything `run_pipeline` needs.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedRun {
    pub observation: Observation,
    pub basis: BasisSpec,
    pub grids: RegGrids,
    pub fdo: FdoDescriptor,
    pub options: PipelineOptions,
}

fn reject(present: bool, key: &str, scenario: ScenarioKind) -> Result<()> {
    if present {
        let name = serde_json::to_value(scenario).ok().and_then(|v| v.as_str().map(String::from));
        return Err(Error::Config(format!(
            "key `{key}` is not used by scenario `{}`",
            name.unwrap_or_default()
        )));
    }
    Ok(())
}

fn required<T: Clone>(v: &Option<T>, key: &str) -> Result<T> {
    v.clone().ok_or_else(|| Error::Config(format!("missing key `{key}`")))
}

impl ExperimentConfig {
    /// Builds the run; relative paths are taken from `base`.
    pub fn resolve(&self, base: &Path) -> Result<ResolvedRun> {
        let s = self.scenario;
        let (observation, fdo, default_reference) = match s {
            ScenarioKind::Example71 | ScenarioKind::Example72 => {
                reject(self.observation.is_some(), "observation", s)?;
                reject(self.fode.is_some(), "fode", s)?;
                reject(self.fdo.is_some(), "fdo", s)?;
                let scenario = if s == ScenarioKind::Example71 {
                    Scenario::Example71
                } else {
                    Scenario::Example72
                };
                let nu0 = required(&self.nu_true, "nu_true")?;
                let kind = self.fdo_kind.unwrap_or(FdoKind::TypeI);
                if scenario == Scenario::Example72 && kind == FdoKind::TypeII {
                    return Err(Error::Config("scenario `example72` has only a first-kind operator".into()));
                }
                let grid = self.grid.clone().unwrap_or_default().resolve(scenario.grid_preset())?;
                let obs = scenario.observation(nu0, kind, self.noise.unwrap_or_else(NoiseSpec::none), grid)?;
                let fdo = obs.meta().fdo.clone().expect("synthetic observations carry their operator");
                (obs, fdo, Some(scenario.reference_order(nu0)))
            }
            ScenarioKind::ObservationFile => {
                for (present, key) in [
                    (self.nu_true.is_some(), "nu_true"),
                    (self.fdo_kind.is_some(), "fdo_kind"),
                    (self.noise.is_some(), "noise"),
                    (self.grid.is_some(), "grid"),
                    (self.fode.is_some(), "fode"),
                ] {
                    reject(present, key, s)?;
                }
                let obs = read_observation(&base.join(required(&self.observation, "observation")?))?;
                let fdo = self
                    .fdo
                    .clone()
                    .or_else(|| obs.meta().fdo.clone())
                    .ok_or_else(|| Error::Config("missing key `fdo` (the observation sidecar has none)".into()))?;
                (obs, fdo, None)
            }
            ScenarioKind::Fode => {
                for (present, key) in [
                    (self.nu_true.is_some(), "nu_true"),
                    (self.fdo_kind.is_some(), "fdo_kind"),
                    (self.fdo.is_some(), "fdo"),
                    (self.observation.is_some(), "observation"),
                ] {
                    reject(present, key, s)?;
                }
                let fode = required(&self.fode, "fode")?;
                let grid = self.grid.clone().unwrap_or_default().resolve(GridPreset::Uniform72)?;
                let obs = fode_observation(&fode, base, grid, self.noise.unwrap_or_else(NoiseSpec::none))?;
                (obs, fode.fdo.clone(), None)
            }
        };
        let t_k = observation.grid().last();
        let basis = self.basis.resolve(default_reference, t_k)?;
        let grids = self.reg_grids.clone().unwrap_or_else(|| RegGrids::standard(t_k));
        grids.validate()?;
        Ok(ResolvedRun {
            observation,
            basis,
            grids,
            fdo,
            options: PipelineOptions {
                log_selection: self.log_selection,
                that_criterion: self.that_criterion,
            },
        })
    }
}

/// Samples a computed solution at the grid points, optionally perturbed.
fn fode_observation(fode: &FodeConfig, base: &Path, grid: TimeGrid, noise: NoiseSpec) -> Result<Observation> {
    noise.validate()?;
    if grid.last() > fode.horizon {
        return Err(Error::Config(format!(
            "grid ends at {} beyond the fode horizon {}",
            grid.last(),
            fode.horizon
        )));
    }
    let solution = solve(&fode.problem(base)?, fode.step)?.to_sampled()?;
    let nu0 = fode.fdo.leading_order();
    let values = grid
        .points()
        .iter()
        .map(|&t| Ok(solution.interpolate(t)? + noise_value(&noise, t, nu0)?))
        .collect::<Result<Vec<f64>>>()?;
    let meta = ObservationMeta {
        scenario: "fode".into(),
        nu_true: Some(nu0),
        noise: Some(noise),
        fdo: Some(fode.fdo.clone()),
    };
    Observation::new(grid, values, fode.v0, meta)
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Format {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn load_experiment(path: &Path) -> Result<ExperimentConfig> {
    parse_json(path)
}

pub fn load_fode(path: &Path) -> Result<FodeConfig> {
    parse_json(path)
}

/// Directory relative paths inside a config are resolved against.
pub fn config_base(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}
