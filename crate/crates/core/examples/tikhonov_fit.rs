//! Regularized fits of a noisy observation across the λ grid.

use fracorder::obsmodel::{example72_observation, GridPreset, NoiseKind, NoiseSpec, TimeGrid};
use fracorder::orderest::RegGrids;
use fracorder::regbasis::BasisSpec;
use fracorder::tikhonov::Fitter;

fn main() -> fracorder::Result<()> {
    let nu0 = 0.5;
    let obs = example72_observation(nu0, NoiseSpec::new(NoiseKind::N3, 0.04)?, TimeGrid::preset(GridPreset::Uniform72))?;
    let t_k = obs.grid().last();
    let spec = BasisSpec::with_reference_order(nu0 / 5.0, t_k)?;
    let fitter = Fitter::new(&obs, &spec)?;
    println!("basis: exponents {:?}, {} Jacobi members", spec.power_exponents, spec.jacobi_count());
    for (i, lambda) in RegGrids::standard(t_k).lambdas().into_iter().enumerate().step_by(10) {
        let m = fitter.fit(lambda)?;
        println!(
            "  i = {:2}  lambda = {lambda:.3e}  residual {:.3e}  model(t_K) = {:.6}  data {:.6}",
            i + 1,
            m.residual_norm(),
            m.eval(t_k)?,
            obs.values()[obs.values().len() - 1]
        );
    }
    Ok(())
}
