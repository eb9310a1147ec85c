use serde::{Deserialize, Serialize};

use super::descriptor::{FdoDescriptor, FdoKind};
use super::grid::TimeGrid;
use super::noise::{noise_value, NoiseSpec};
use crate::error::{Error, Result};
use crate::fraccalc::{gamma_fn, PowerSum};

/// Everything about an observation besides the samples themselves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservationMeta {
    pub scenario: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu_true: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fdo: Option<FdoDescriptor>,
}

impl ObservationMeta {
    pub fn custom(scenario: impl Into<String>) -> Self {
        Self {
            scenario: scenario.into(),
            nu_true: None,
            noise: None,
            fdo: None,
        }
    }
}

/// Samples `ψ_{k,ε}` on a grid plus the exact initial value `ψ₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    grid: TimeGrid,
    values: Vec<f64>,
    psi0: f64,
    meta: ObservationMeta,
}

impl Observation {
    pub fn new(grid: TimeGrid, values: Vec<f64>, psi0: f64, meta: ObservationMeta) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(
                "observation",
                format!("{} values for {} grid points", values.len(), grid.len()),
            ));
        }
        if !psi0.is_finite() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("observation", "non-finite value"));
        }
        Ok(Self {
            grid,
            values,
            psi0,
            meta,
        })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn times(&self) -> &[f64] {
        self.grid.points()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn psi0(&self) -> f64 {
        self.psi0
    }

    pub fn meta(&self) -> &ObservationMeta {
        &self.meta
    }
}

fn check_order(nu0: f64) -> Result<()> {
    if !(nu0 > 0.0 && nu0 < 1.0) {
        return Err(Error::domain("observation", format!("order {nu0} outside (0, 1)")));
    }
    Ok(())
}

fn sample(grid: &TimeGrid, nu0: f64, noise: &NoiseSpec, exact: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
    noise.validate()?;
    grid.points()
        .iter()
        .map(|&t| Ok(exact(t) + noise_value(noise, t, nu0)?))
        .collect()
}

/// Operator of the first scenario: `r₀ = 1 + t`, `r₁ = 1/2` with `ν₁ = ν₀/3`,
/// negative branch `γ₁ = (1 + t²)/2` with `ν̄₁ = ν₀/2`.
pub fn example71_descriptor(nu0: f64, kind: FdoKind) -> Result<FdoDescriptor> {
    FdoDescriptor::new(
        kind,
        vec![nu0, nu0 / 3.0],
        vec![PowerSum::polynomial(&[1.0, 1.0]), PowerSum::constant(0.5)],
    )?
    .with_negative_branch(vec![nu0 / 2.0], vec![PowerSum::polynomial(&[0.5, 0.0, 0.5])])
}

/// Operator of the second scenario: `r₀ = 1/2`, `r₁ = -(1 + t²)/4` with `ν₁ = ν₀/5`.
pub fn example72_descriptor(nu0: f64) -> Result<FdoDescriptor> {
    FdoDescriptor::new(
        FdoKind::TypeI,
        vec![nu0, nu0 / 5.0],
        vec![PowerSum::constant(0.5), PowerSum::polynomial(&[-0.25, 0.0, -0.25])],
    )
}

/// Local observation at `x = 1/2` of `u = cos(πx) + t^ν₀/Γ(1+ν₀)`:
/// `ψ(t) = t^ν₀/Γ(1+ν₀)`, `ψ₀ = 0`.
pub fn example71_observation(nu0: f64, kind: FdoKind, noise: NoiseSpec, grid: TimeGrid) -> Result<Observation> {
    check_order(nu0)?;
    let g = gamma_fn(1.0 + nu0)?;
    let values = sample(&grid, nu0, &noise, |t| t.powf(nu0) / g)?;
    let meta = ObservationMeta {
        scenario: "example71".into(),
        nu_true: Some(nu0),
        noise: Some(noise),
        fdo: Some(example71_descriptor(nu0, kind)?),
    };
    Observation::new(grid, values, 0.0, meta)
}

/// Spatial factor `(∫₀² x²(2-x)² dx)² = (16/15)²`.
pub const EXAMPLE72_SCALE: f64 = 256.0 / 225.0;

/// Nonlocal observation `ψ(t) = (256/225)(2 + t^ν₀)`, `ψ₀ = 512/225`.
pub fn example72_observation(nu0: f64, noise: NoiseSpec, grid: TimeGrid) -> Result<Observation> {
    check_order(nu0)?;
    let values = sample(&grid, nu0, &noise, |t| EXAMPLE72_SCALE * (2.0 + t.powf(nu0)))?;
    let meta = ObservationMeta {
        scenario: "example72".into(),
        nu_true: Some(nu0),
        noise: Some(noise),
        fdo: Some(example72_descriptor(nu0)?),
    };
    Observation::new(grid, values, 2.0 * EXAMPLE72_SCALE, meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::obsmodel::{GridPreset, NoiseKind};
    use crate::oracle;

    #[test]
    fn example71_values() {
        let grid = TimeGrid::new(vec![1e-3, 2e-3]).unwrap();
        let clean = example71_observation(0.5, FdoKind::TypeI, NoiseSpec::none(), grid.clone()).unwrap();
        let expected = 1e-3f64.sqrt() / oracle::gamma_by_quadrature(1.5);
        assert!((clean.values()[0] - expected).abs() < 1e-15);
        assert!((clean.values()[0] - 0.035_682_5).abs() < 1e-7);
        assert_eq!(clean.psi0(), 0.0);
        let noisy =
            example71_observation(0.5, FdoKind::TypeI, NoiseSpec::new(NoiseKind::N2, 0.3).unwrap(), grid).unwrap();
        assert!((noisy.values()[0] - expected - 0.3 * 1e-3f64.sqrt()).abs() < 1e-15);
        let d = clean.meta().fdo.as_ref().unwrap();
        assert_eq!(d.orders(), [0.5, 0.5 / 3.0]);
        assert_eq!(d.negative_orders(), [0.25]);
        assert_eq!(d.r0().eval(2.0), 3.0);
    }

    #[test]
    fn example72_values() {
        // spatial factor from direct quadrature
        let one_d = oracle::integrate_composite(|x| x * x * (2.0 - x) * (2.0 - x), 0.0, 2.0, 4);
        assert!((one_d * one_d - EXAMPLE72_SCALE).abs() < 1e-14);
        let grid = TimeGrid::preset(GridPreset::Uniform72);
        let obs = example72_observation(0.3, NoiseSpec::none(), grid).unwrap();
        assert!((obs.psi0() - 2.275_555_6).abs() < 1e-7);
        let t = 21e-4f64;
        assert!((obs.values()[20] - EXAMPLE72_SCALE * (2.0 + t.powf(0.3))).abs() < 1e-15);
        assert_eq!(obs.meta().fdo.as_ref().unwrap().r0().constant_value(), Some(0.5));
    }

    #[test]
    fn rejects_bad_inputs() {
        let grid = TimeGrid::preset(GridPreset::Uniform72);
        assert!(example72_observation(1.2, NoiseSpec::none(), grid.clone()).is_err());
        assert!(Observation::new(grid, vec![1.0], 0.0, ObservationMeta::custom("x")).is_err());
    }
}
