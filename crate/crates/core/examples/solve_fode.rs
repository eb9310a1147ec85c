//! Solves `D^ν₀ v + t^{-1/3} * v + v = f₀` with `f₀` chosen so that
//! `v = v₀ + t^ν₀/Γ(1+ν₀)`, then recovers ν₀ from the computed solution.

use fracorder::fodesolver::{solve, verify_linking, FodeProblem, Forcing, Nonlinearity};
use fracorder::fraccalc::{gamma_fn, PowerSum};
use fracorder::obsmodel::{FdoDescriptor, FdoKind};

fn main() -> fracorder::Result<()> {
    let v0 = 0.5;
    for nu0 in [0.3, 0.5, 0.7] {
        let g = gamma_fn(1.0 + nu0)?;
        let f0 = PowerSum::new(vec![
            (1.0 + v0, 0.0),
            (1.0 / g, nu0),
            (1.5 * v0, 2.0 / 3.0),
            (gamma_fn(2.0 / 3.0)? / gamma_fn(5.0 / 3.0 + nu0)?, 2.0 / 3.0 + nu0),
        ])?;
        let problem = FodeProblem::new(
            FdoDescriptor::single(FdoKind::TypeI, nu0, PowerSum::constant(1.0))?,
            PowerSum::new(vec![(1.0, -1.0 / 3.0)])?,
            Forcing::Power(f0),
            Nonlinearity::none(),
            v0,
            1.0,
        )?;
        for n in [256usize, 1024, 4096] {
            let sol = solve(&problem, 1.0 / n as f64)?;
            let err = sol
                .times()
                .iter()
                .zip(sol.values())
                .map(|(t, v)| (v - v0 - t.powf(nu0) / g).abs())
                .fold(0.0, f64::max);
            println!(
                "nu0 = {nu0}  n = {n:5}  max error {err:.3e}  recovered {:.4}",
                verify_linking(&sol, &problem)?
            );
        }
    }
    Ok(())
}
