use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NoiseKind {
    #[serde(rename = "none")]
    None,
    /// `ε t |ln t|`
    N1,
    /// `ε t^ν₀`
    N2,
    /// `ε t^ν₀ |ln t|`
    N3,
}

impl NoiseKind {
    pub fn label(self) -> &'static str {
        match self {
            NoiseKind::None => "none",
            NoiseKind::N1 => "N1",
            NoiseKind::N2 => "N2",
            NoiseKind::N3 => "N3",
        }
    }
}

/// Deterministic additive perturbation of an observation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    #[serde(default)]
    pub epsilon: f64,
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, epsilon: f64) -> Result<Self> {
        let spec = Self { kind, epsilon };
        spec.validate()?;
        Ok(spec)
    }

    pub fn none() -> Self {
        Self {
            kind: NoiseKind::None,
            epsilon: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::invalid("noise", format!("epsilon {} must be a finite value >= 0", self.epsilon)));
        }
        Ok(())
    }
}

/// The perturbation added to the exact value at time `t ∈ (0, 1)`.
pub fn noise_value(spec: &NoiseSpec, t: f64, nu0: f64) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::domain("noise_value", format!("t = {t} outside (0, 1)")));
    }
    let eps = spec.epsilon;
    Ok(match spec.kind {
        NoiseKind::None => 0.0,
        NoiseKind::N1 => eps * t * (-t.ln()),
        NoiseKind::N2 => eps * t.powf(nu0),
        NoiseKind::N3 => eps * t.powf(nu0) * (-t.ln()),
    })
}
