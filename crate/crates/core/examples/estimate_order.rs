//! One full estimation run with both parameter-selection settings.

use fracorder::obsmodel::{FdoKind, NoiseKind, NoiseSpec};
use fracorder::orderest::{PipelineOptions, ThatCriterion};
use fracorder::presets::{PresetRun, Scenario};

fn main() -> fracorder::Result<()> {
    let run = PresetRun::new(Scenario::Example71, 0.5, FdoKind::TypeI, NoiseSpec::new(NoiseKind::N1, 0.03)?)?;
    let literal = PipelineOptions {
        that_criterion: ThatCriterion::Consecutive,
        ..PipelineOptions::default()
    };
    for (name, options) in [
        ("default", PipelineOptions::default()),
        ("consecutive t-hat rule", literal),
        ("table presets", PipelineOptions::table_presets()),
    ] {
        let r = run.run(options)?;
        println!(
            "{name}: nu_ratio = {:.4} at (i, j) = ({}, {}), nu_log = {:.4} at ({}, {})",
            r.nu_ratio(),
            r.ratio.i,
            r.ratio.j,
            r.nu_log(),
            r.log.i,
            r.log.j
        );
    }
    println!("reference values: 0.5017 / 0.4804");
    Ok(())
}
