//! L1 Caputo derivative of `t^μ` against the power rule, on refining grids.

use fracorder::fraccalc::{caputo_l1, gamma_fn, rl_integral, SampledFunction};

fn main() -> fracorder::Result<()> {
    let (mu, nu) = (0.7, 0.5);
    let exact = gamma_fn(1.0 + mu)? / gamma_fn(1.0 + mu - nu)?;
    println!("D^{nu} t^{mu} at t = 1, exact {exact:.10}");
    let mut prev = None;
    for n in [64usize, 128, 256, 512, 1024] {
        let f = SampledFunction::uniform(1.0 / n as f64, n, |t| t.powf(mu))?;
        let d = caputo_l1(&f, nu)?;
        let err = (d.values()[n] - exact).abs();
        let order = prev.map(|p: f64| format!("{:.3}", (p / err).log2())).unwrap_or_default();
        println!("  n = {n:5}  error {err:.3e}  order {order}");
        prev = Some(err);
    }

    // I^{1-ν} applied to the derivative recovers t^μ up to discretization error
    let n = 1024;
    let f = SampledFunction::uniform(1.0 / n as f64, n, |t| t.powf(mu))?;
    let back = rl_integral(&caputo_l1(&f, nu)?, 1.0 - nu)?;
    println!("I^(1-nu) D^nu t^mu at t = 1: {:.6} (expected 1)", back.values()[n]);
    Ok(())
}
