use crate::error::{Error, Result};
use crate::fraccalc::linking::DEGENERACY_THRESHOLD;
use crate::obsmodel::{FdoDescriptor, FdoKind};
use crate::tikhonov::FitModel;

/// `t̂(ψ_ε(t̂) − ψ₀) / ∫₀^{t̂}(ψ_ε − ψ₀) − 1`, or its weighted form for a
/// second-kind operator. A constant `r₀` cancels, so that case is computed
/// exactly as for the first kind.
pub fn ratio_estimate(m: &FitModel, psi0: f64, fdo: &FdoDescriptor, that: f64) -> Result<f64> {
    let r0 = fdo.r0();
    let (num, den) = match (fdo.kind(), r0.constant_value()) {
        (FdoKind::TypeI, _) | (FdoKind::TypeII, Some(_)) => (m.eval(that)? - psi0, m.integral(that)? - psi0 * that),
        (FdoKind::TypeII, None) => {
            let r00 = r0.at_zero();
            (
                r0.eval(that) * m.eval(that)? - r00 * psi0,
                m.integral_weighted(r0, that)? - r00 * psi0 * that,
            )
        }
    };
    if !(den.abs() >= DEGENERACY_THRESHOLD) {
        return Err(Error::degenerate("ratio_estimate", format!("denominator {den:e} at t̂ = {that}")));
    }
    Ok(that * num / den - 1.0)
}

/// `ln|ψ_ε(t̂) − ψ₀| / ln t̂`, with `r₀(t̂)ψ_ε(t̂) − r₀(0)ψ₀` inside the
/// logarithm for a second-kind operator.
pub fn log_estimate(m: &FitModel, psi0: f64, fdo: &FdoDescriptor, that: f64) -> Result<f64> {
    if !(that > 0.0 && that < 1.0) {
        return Err(Error::domain("log_estimate", format!("t̂ = {that} outside (0, 1)")));
    }
    let arg = match fdo.kind() {
        FdoKind::TypeI => m.eval(that)? - psi0,
        FdoKind::TypeII => {
            let r0 = fdo.r0();
            r0.eval(that) * m.eval(that)? - r0.at_zero() * psi0
        }
    };
    if arg == 0.0 || !arg.is_finite() {
        return Err(Error::degenerate("log_estimate", format!("logarithm argument {arg} at t̂ = {that}")));
    }
    Ok(arg.abs().ln() / that.ln())
}
