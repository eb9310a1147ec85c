//! Direct evaluators of the small-time limits that tie a function to the order
//! of its leading Caputo derivative, plus extrapolation of discrete
//! derivatives to `t = 0`.

use super::operators::caputo_l1;
use super::sampled::{PowerSum, SampledFunction};
use crate::error::{Error, Result};

/// Denominators below this magnitude mark the observation as degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-300;

fn check_probes(probe_times: &[f64], end: f64) -> Result<()> {
    for (k, &t) in probe_times.iter().enumerate() {
        if !(t > 0.0 && t <= end) {
            return Err(Error::domain("ratio_limit_probe", format!("probe time {t} outside (0, {end}]")));
        }
        if k > 0 && !(t < probe_times[k - 1]) {
            return Err(Error::domain("ratio_limit_probe", "probe times must be strictly decreasing"));
        }
    }
    Ok(())
}

fn ratio(t: f64, increment: f64, integral: f64) -> Result<f64> {
    if !(integral.abs() >= DEGENERACY_THRESHOLD) {
        return Err(Error::degenerate(
            "ratio_limit_probe",
            format!("∫₀^t (f - f(0)) = {integral:e} at t = {t}"),
        ));
    }
    Ok(t * increment / integral - 1.0)
}

/// `t (f(t) - f0) / ∫₀^t (f - f0) dτ - 1` at each probe time, with the integral
/// taken over the piecewise-linear interpolant on `[0, t]`.
pub fn ratio_limit_probe(f: &SampledFunction, f0: f64, probe_times: &[f64]) -> Result<Vec<f64>> {
    check_probes(probe_times, f.end())?;
    probe_times
        .iter()
        .map(|&t| ratio(t, f.interpolate(t)? - f0, f.integral_to(t, f0)?))
        .collect()
}

/// Variable-coefficient form: `r₀(t) f(t) - r₀(0) f0` replaces `f(t) - f0`.
/// A constant `r₀` reduces to [`ratio_limit_probe`] exactly.
pub fn ratio_limit_probe_type_ii(
    f: &SampledFunction,
    f0: f64,
    r0: &PowerSum,
    probe_times: &[f64],
) -> Result<Vec<f64>> {
    if r0.constant_value().is_some() {
        return ratio_limit_probe(f, f0, probe_times);
    }
    let weighted: Vec<f64> = f
        .times()
        .iter()
        .zip(f.values())
        .map(|(&t, &v)| r0.eval(t) * v)
        .collect();
    ratio_limit_probe(&f.with_values(weighted), r0.at_zero() * f0, probe_times)
}

/// Closed-form version of [`ratio_limit_probe`] for a function given as a
/// power sum; exact on monomials up to rounding.
pub fn ratio_limit_exact(f: &PowerSum, f0: f64, probe_times: &[f64]) -> Result<Vec<f64>> {
    for &t in probe_times {
        if !(t > 0.0) {
            return Err(Error::domain("ratio_limit_exact", format!("probe time {t} is not positive")));
        }
    }
    probe_times
        .iter()
        .map(|&t| ratio(t, f.eval(t) - f0, f.antiderivative(t) - f0 * t))
        .collect()
}

/// Closed-form variable-coefficient version.
pub fn ratio_limit_exact_type_ii(f: &PowerSum, f0: f64, r0: &PowerSum, probe_times: &[f64]) -> Result<Vec<f64>> {
    if r0.constant_value().is_some() {
        return ratio_limit_exact(f, f0, probe_times);
    }
    ratio_limit_exact(&r0.mul(f), r0.at_zero() * f0, probe_times)
}

/// Extrapolates `g(s) ≈ c₀ + c₁ s^p` to `s = 0` from samples at `s`, `s/2`,
/// `s/4` (passed as `[g(s), g(s/2), g(s/4)]`), estimating `p` from the data.
///
/// Falls back to the finest sample when the differences do not contract.
pub fn extrapolate_to_zero(samples: [f64; 3]) -> f64 {
    let [g_coarse, g_mid, g_fine] = samples;
    let d_outer = g_mid - g_coarse;
    let d_inner = g_fine - g_mid;
    if d_outer == 0.0 {
        return g_fine;
    }
    let q = d_inner / d_outer;
    if !(q > 0.0 && q < 1.0) {
        return g_fine;
    }
    g_fine + d_inner * q / (1.0 - q)
}

/// L1 Caputo derivative of order `nu`, sampled at `end/2`, `end/4`, `end/8` and
/// extrapolated to `t = 0`.
pub fn caputo_at_zero(v: &SampledFunction, nu: f64) -> Result<f64> {
    let d = caputo_l1(v, nu)?;
    let end = v.end();
    let samples = [
        d.interpolate(end / 2.0)?,
        d.interpolate(end / 4.0)?,
        d.interpolate(end / 8.0)?,
    ];
    Ok(extrapolate_to_zero(samples))
}

/// Both sides of `r₀(0) D^{ν₀}v|₀ = (Σ rᵢ D^{νᵢ} v)|₀` for a first-kind operator,
/// each derivative extrapolated to zero separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub leading_side: f64,
    pub operator_side: f64,
    pub residual: f64,
}

/// Evaluates the identity above for `orders` (leading first) and matching
/// coefficient polynomials.
pub fn initial_identity_residual(v: &SampledFunction, orders: &[f64], coeffs: &[PowerSum]) -> Result<IdentityCheck> {
    if orders.is_empty() || orders.len() != coeffs.len() {
        return Err(Error::invalid(
            "operator data",
            format!("{} orders but {} coefficients", orders.len(), coeffs.len()),
        ));
    }
    let at_zero: Vec<f64> = orders.iter().map(|&nu| caputo_at_zero(v, nu)).collect::<Result<_>>()?;
    let leading_side = coeffs[0].at_zero() * at_zero[0];
    let operator_side: f64 = coeffs.iter().zip(&at_zero).map(|(r, d)| r.at_zero() * d).sum();
    Ok(IdentityCheck {
        leading_side,
        operator_side,
        residual: (leading_side - operator_side).abs(),
    })
}
