//! Discrete Caputo derivative (L1 scheme) and Riemann-Liouville integral on
//! possibly nonuniform grids, both built on exact moments of the power kernel
//! over each grid interval.

use super::sampled::SampledFunction;
use super::special::gamma_positive;
use crate::error::{Error, Result};

/// Below this value of `h / x` the moments are summed from the binomial series,
/// which avoids the cancellation in the closed form far from the singularity.
const SERIES_RATIO: f64 = 0.25;

/// Moments of the kernel `u^β` over one interval of length `h` whose far end
/// sits at distance `x >= h` from the evaluation point:
///
/// `m0 = ∫_{x-h}^{x} u^β du`, `m1 = ∫_{x-h}^{x} u^β (x - u) du`.
///
/// With `s` the integration variable on `[a, b]` and `u = t - s`, `m1` is the
/// moment against `s - a`, i.e. the weight carried by the right-hand node of a
/// piecewise-linear integrand.
pub(crate) fn interval_moments(x: f64, h: f64, beta: f64) -> (f64, f64) {
    debug_assert!(x >= h * (1.0 - 1e-12) && h > 0.0 && beta > -1.0);
    let r = h / x;
    if r <= SERIES_RATIO {
        // (1 - v/x)^β expanded in v/x; a_m = (-1)^m C(β, m)
        let xb = x.powf(beta);
        let (mut s0, mut s1) = (0.0, 0.0);
        let mut a = 1.0;
        let mut rm = 1.0;
        for m in 0..200 {
            let t0 = a * rm / (m as f64 + 1.0);
            let t1 = a * rm / (m as f64 + 2.0);
            s0 += t0;
            s1 += t1;
            if t0.abs() <= 1e-17 * s0.abs() && m > 2 {
                break;
            }
            a *= (m as f64 - beta) / (m as f64 + 1.0);
            rm *= r;
        }
        (xb * h * s0, xb * h * h * s1)
    } else {
        let y = (x - h).max(0.0);
        let p1 = beta + 1.0;
        let p2 = beta + 2.0;
        let m0 = (x.powf(p1) - y.powf(p1)) / p1;
        let m1 = x * m0 - (x.powf(p2) - y.powf(p2)) / p2;
        (m0, m1)
    }
}

/// Moments for a uniform grid, indexed by the interval offset `m = n - k`
/// (`m = 1` is the interval ending at the evaluation node). Entry 0 is unused.
pub(crate) fn uniform_moments(h: f64, n_max: usize, beta: f64) -> (Vec<f64>, Vec<f64>) {
    let mut m0 = vec![0.0; n_max + 1];
    let mut m1 = vec![0.0; n_max + 1];
    for m in 1..=n_max {
        let (a, b) = interval_moments(m as f64 * h, h, beta);
        m0[m] = a;
        m1[m] = b;
    }
    (m0, m1)
}

fn uniform_step(times: &[f64]) -> Option<f64> {
    let n = times.len() - 1;
    let h = times[n] / n as f64;
    times
        .iter()
        .enumerate()
        .all(|(k, &t)| (t - k as f64 * h).abs() <= 1e-12 * times[n])
        .then_some(h)
}

/// L1 approximation of the Caputo derivative of order `nu ∈ (0, 1)` at every
/// node; node 0 carries the value 0.
pub fn caputo_l1(f: &SampledFunction, nu: f64) -> Result<SampledFunction> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(Error::domain("caputo_l1", format!("order {nu} outside (0, 1)")));
    }
    let t = f.times();
    let v = f.values();
    let n = t.len();
    let scale = 1.0 / gamma_positive(1.0 - nu);
    let slopes: Vec<f64> = (0..n - 1).map(|k| (v[k + 1] - v[k]) / (t[k + 1] - t[k])).collect();
    let mut out = vec![0.0; n];
    if let Some(h) = uniform_step(t) {
        let (m0, _) = uniform_moments(h, n - 1, -nu);
        for i in 1..n {
            out[i] = scale * (0..i).map(|k| slopes[k] * m0[i - k]).sum::<f64>();
        }
    } else {
        for i in 1..n {
            let acc: f64 = (0..i)
                .map(|k| slopes[k] * interval_moments(t[i] - t[k], t[k + 1] - t[k], -nu).0)
                .sum();
            out[i] = scale * acc;
        }
    }
    Ok(f.with_values(out))
}

/// Riemann-Liouville integral `I^θ f = ω_θ * f` by product integration of the
/// piecewise-linear interpolant of `f`.
pub fn rl_integral(f: &SampledFunction, theta: f64) -> Result<SampledFunction> {
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::domain("rl_integral", format!("order {theta} is not positive")));
    }
    let t = f.times();
    let v = f.values();
    let n = t.len();
    let beta = theta - 1.0;
    let scale = 1.0 / gamma_positive(theta);
    let mut out = vec![0.0; n];
    let uniform = uniform_step(t).map(|h| (h, uniform_moments(h, n - 1, beta)));
    for i in 1..n {
        let mut acc = 0.0;
        for k in 0..i {
            let h = t[k + 1] - t[k];
            let (m0, m1) = match &uniform {
                Some((_, (w0, w1))) => (w0[i - k], w1[i - k]),
                None => interval_moments(t[i] - t[k], h, beta),
            };
            let right = m1 / h;
            acc += v[k] * (m0 - right) + v[k + 1] * right;
        }
        out[i] = scale * acc;
    }
    Ok(f.with_values(out))
}
