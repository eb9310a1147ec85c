//! The ratio limit recovering the order of `t^ν + t`, and the small-time
//! identity for a two-term operator.

use fracorder::fraccalc::{gamma_fn, initial_identity_residual, ratio_limit_exact, ratio_limit_probe, PowerSum, SampledFunction};

fn main() -> fracorder::Result<()> {
    let nu = 0.4;
    let f = PowerSum::new(vec![(1.0, nu), (1.0, 1.0)])?;
    let probes: Vec<f64> = (1..=10).map(|m| 0.5f64.powi(m)).collect();
    let exact = ratio_limit_exact(&f, 0.0, &probes)?;
    let sampled = SampledFunction::uniform(1.0 / 65536.0, 65536, |t| f.eval(t))?;
    let numeric = ratio_limit_probe(&sampled, 0.0, &probes)?;
    println!("ratio limit for t^{nu} + t");
    for ((t, e), n) in probes.iter().zip(&exact).zip(&numeric) {
        println!("  t = {t:.6}  closed form {e:.6}  sampled {n:.6}");
    }

    let nu0 = 0.6;
    let g = gamma_fn(1.0 + nu0)?;
    for n in [256usize, 512, 1024, 2048] {
        let v = SampledFunction::uniform(1.0 / n as f64, n, |t| 0.2 + t.powf(nu0) / g)?;
        let c = initial_identity_residual(&v, &[nu0, nu0 / 3.0], &[PowerSum::constant(1.0), PowerSum::constant(0.5)])?;
        println!("  n = {n:5}  leading {:.6}  operator {:.6}  residual {:.3e}", c.leading_side, c.operator_side, c.residual);
    }
    Ok(())
}
