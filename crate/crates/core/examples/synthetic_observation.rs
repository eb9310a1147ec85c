//! Builds the two synthetic observations and writes one as CSV with its sidecar.

use fracorder::cli::io::write_observation;
use fracorder::obsmodel::{
    example71_observation, example72_observation, FdoKind, GridPreset, NoiseKind, NoiseSpec, TimeGrid,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let noise = NoiseSpec::new(NoiseKind::N2, 0.3)?;
    let local = example71_observation(0.5, FdoKind::TypeII, noise, TimeGrid::preset(GridPreset::Nonuniform71))?;
    let nonlocal = example72_observation(0.5, NoiseSpec::none(), TimeGrid::preset(GridPreset::Uniform72))?;
    for (name, obs) in [("local", &local), ("nonlocal", &nonlocal)] {
        println!("{name}: psi0 = {}, {} samples", obs.psi0(), obs.values().len());
        for (t, v) in obs.times().iter().zip(obs.values()).take(3) {
            println!("  t = {t:.4e}  psi = {v:.8}");
        }
    }
    let dir = std::env::temp_dir().join("fracorder-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("local.csv");
    write_observation(&local, &path)?;
    println!("wrote {}", path.display());
    Ok(())
}
