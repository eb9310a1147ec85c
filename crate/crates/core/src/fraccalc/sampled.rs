use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A function tabulated on a strictly increasing grid that starts at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::invalid(
                "sampled function",
                format!("{} times but {} values", times.len(), values.len()),
            ));
        }
        if times.len() < 2 {
            return Err(Error::invalid("sampled function", "at least two nodes are required"));
        }
        if times[0] != 0.0 {
            return Err(Error::invalid("sampled function", format!("first node is {} instead of 0", times[0])));
        }
        if let Some(k) = times.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::invalid(
                "sampled function",
                format!("times not strictly increasing at index {}", k + 1),
            ));
        }
        if times.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::invalid("sampled function", "non-finite entry"));
        }
        Ok(Self { times, values })
    }

    pub fn from_fn(times: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = times.iter().map(|&t| f(t)).collect();
        Self::new(times, values)
    }

    /// `n + 1` equispaced nodes `0, h, …, n h`.
    pub fn uniform(h: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::invalid("sampled function", format!("step {h} is not positive")));
        }
        Self::from_fn((0..=n).map(|k| k as f64 * h).collect(), f)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn end(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    /// Same grid, new values.
    pub(crate) fn with_values(&self, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), self.times.len());
        Self {
            times: self.times.clone(),
            values,
        }
    }

    /// Index `k` with `times[k] <= t < times[k+1]` (last interval for `t = end`).
    fn interval_of(&self, t: f64) -> usize {
        let k = self.times.partition_point(|&s| s <= t);
        k.saturating_sub(1).min(self.times.len() - 2)
    }

    /// Piecewise-linear interpolant.
    pub fn interpolate(&self, t: f64) -> Result<f64> {
        if !(0.0..=self.end()).contains(&t) {
            return Err(Error::domain("interpolate", format!("t = {t} outside [0, {}]", self.end())));
        }
        let k = self.interval_of(t);
        let (t0, t1) = (self.times[k], self.times[k + 1]);
        let s = (t - t0) / (t1 - t0);
        Ok(self.values[k] + s * (self.values[k + 1] - self.values[k]))
    }

    /// `∫₀^t (f - shift) dτ` for the piecewise-linear interpolant.
    pub fn integral_to(&self, t: f64, shift: f64) -> Result<f64> {
        if !(0.0..=self.end()).contains(&t) {
            return Err(Error::domain("integral_to", format!("t = {t} outside [0, {}]", self.end())));
        }
        let k = self.interval_of(t);
        let mut acc = 0.0;
        for i in 0..k {
            let h = self.times[i + 1] - self.times[i];
            acc += 0.5 * h * (self.values[i] + self.values[i + 1] - 2.0 * shift);
        }
        let end_val = self.interpolate(t)?;
        acc += 0.5 * (t - self.times[k]) * (self.values[k] + end_val - 2.0 * shift);
        Ok(acc)
    }
}

/// A finite sum `Σ c_k t^{e_k}` with every exponent above `-1`.
///
/// Polynomials are the special case of nonnegative integer exponents. The empty
/// sum is the zero function.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct PowerSum {
    terms: Vec<(f64, f64)>,
}

impl TryFrom<Vec<(f64, f64)>> for PowerSum {
    type Error = Error;

    fn try_from(terms: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(terms)
    }
}

impl From<PowerSum> for Vec<(f64, f64)> {
    fn from(p: PowerSum) -> Self {
        p.terms
    }
}

impl PowerSum {
    /// Terms are `(coefficient, exponent)` pairs.
    pub fn new(terms: Vec<(f64, f64)>) -> Result<Self> {
        for &(c, e) in &terms {
            if !c.is_finite() || !e.is_finite() {
                return Err(Error::invalid("power sum", format!("non-finite term ({c}, {e})")));
            }
            if !(e > -1.0) {
                return Err(Error::invalid("power sum", format!("exponent {e} is not above -1")));
            }
        }
        Ok(Self { terms })
    }

    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self { terms: vec![(c, 0.0)] }
    }

    /// `Σ c_k t^k` from ascending coefficients.
    pub fn polynomial(coeffs: &[f64]) -> Self {
        Self {
            terms: coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0.0)
                .map(|(k, &c)| (c, k as f64))
                .collect(),
        }
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|&(c, _)| c == 0.0)
    }

    /// True if every nonzero term has exponent zero.
    pub fn constant_value(&self) -> Option<f64> {
        if self.terms.iter().all(|&(c, e)| c == 0.0 || e == 0.0) {
            Some(self.terms.iter().map(|&(c, _)| c).sum())
        } else {
            None
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.iter().all(|&(_, e)| e >= 0.0 && e.fract() == 0.0)
    }

    /// Value at `t >= 0`; `0^0` is taken as 1.
    pub fn eval(&self, t: f64) -> f64 {
        self.terms.iter().map(|&(c, e)| c * pow0(t, e)).sum()
    }

    /// `∫₀^t` of the sum.
    pub fn antiderivative(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(c, e)| c * t.powf(e + 1.0) / (e + 1.0))
            .sum()
    }

    /// Value at `t = 0`: the exponent-zero coefficients, or ±∞ for negative exponents.
    pub fn at_zero(&self) -> f64 {
        self.eval(0.0)
    }

    pub fn mul(&self, other: &PowerSum) -> PowerSum {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(c1, e1) in &self.terms {
            for &(c2, e2) in &other.terms {
                terms.push((c1 * c2, e1 + e2));
            }
        }
        PowerSum { terms }
    }

    pub fn scale(&self, s: f64) -> PowerSum {
        PowerSum {
            terms: self.terms.iter().map(|&(c, e)| (c * s, e)).collect(),
        }
    }

    pub fn add(&self, other: &PowerSum) -> PowerSum {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        PowerSum { terms }
    }

    /// Smallest value over a mesh of spacing at most `step` on `[0, t_max]`,
    /// endpoints included.
    pub fn min_on_mesh(&self, t_max: f64, step: f64) -> f64 {
        let n = ((t_max / step).ceil() as usize).max(1);
        (0..=n)
            .map(|k| self.eval(t_max * k as f64 / n as f64))
            .fold(f64::INFINITY, f64::min)
    }
}

/// `t^e` with `0^0 = 1`.
pub(crate) fn pow0(t: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else {
        t.powf(e)
    }
}
