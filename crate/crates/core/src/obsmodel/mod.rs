//! Time grids, deterministic noise, operator descriptors and the synthetic
//! observations of the two reference scenarios.

mod descriptor;
mod grid;
mod noise;
mod observation;

pub use descriptor::{FdoDescriptor, FdoKind, POSITIVITY_MESH};
pub use grid::{GridPreset, TimeGrid, PRESET_TAU};
pub use noise::{noise_value, NoiseKind, NoiseSpec};
pub use observation::{
    example71_descriptor, example71_observation, example72_descriptor, example72_observation, Observation,
    ObservationMeta, EXAMPLE72_SCALE,
};
