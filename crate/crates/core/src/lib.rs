pub mod cli;
pub mod error;
pub mod fodesolver;
pub mod fraccalc;
pub mod obsmodel;
pub mod orderest;
pub mod presets;
pub mod regbasis;
pub mod tables;
pub mod tikhonov;

#[cfg(test)]
mod oracle;

pub use error::{Error, Result};
