use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Spacing of the preset grids.
pub const PRESET_TAU: f64 = 1e-4;

/// Observation times `0 < t₁ < … < t_K < 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TimeGrid {
    points: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridPreset {
    /// `[5, 6, 12, 13, …, 30] · τ`.
    Nonuniform71,
    /// `[1, 2, …, 21] · τ`.
    Uniform72,
}

impl TryFrom<Vec<f64>> for TimeGrid {
    type Error = Error;

    fn try_from(points: Vec<f64>) -> Result<Self> {
        Self::new(points)
    }
}

impl From<TimeGrid> for Vec<f64> {
    fn from(g: TimeGrid) -> Self {
        g.points
    }
}

impl TimeGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("time grid", "no points"));
        }
        if let Some(t) = points.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
            return Err(Error::invalid("time grid", format!("point {t} outside (0, 1)")));
        }
        if let Some(k) = points.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::invalid(
                "time grid",
                format!("points not strictly increasing at index {}", k + 1),
            ));
        }
        Ok(Self { points })
    }

    pub fn preset(kind: GridPreset) -> Self {
        let multiples: Vec<u32> = match kind {
            GridPreset::Nonuniform71 => [5, 6].into_iter().chain((3..=21).map(|k| 9 + k)).collect(),
            GridPreset::Uniform72 => (1..=21).collect(),
        };
        Self {
            points: multiples.into_iter().map(|m| m as f64 * PRESET_TAU).collect(),
        }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The right endpoint `t_K`.
    pub fn last(&self) -> f64 {
        self.points[self.points.len() - 1]
    }
}
