//! Uniform-step solver for the multi-term fractional Cauchy problem
//!
//! `Σ rᵢ(t) D^{νᵢ} v + (𝒦 * v)(t) + v(t) = f₀(t) + f(t, v)`, `v(0) = v₀`,
//!
//! with the L1 scheme for every Caputo term and product integration for the
//! memory term.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fraccalc::linking::extrapolate_to_zero;
use crate::fraccalc::operators::uniform_moments;
use crate::fraccalc::special::gamma_positive;
use crate::fraccalc::{ratio_limit_probe, PowerSum, SampledFunction};
use crate::obsmodel::{FdoDescriptor, FdoKind};

pub const NEWTON_TOLERANCE: f64 = 1e-12;
pub const MAX_ITERATIONS: u32 = 100;

/// Number of probe times `T·2^{-m}`, `m = 1..PROBE_COUNT`, used by
/// [`verify_linking`].
pub const PROBE_COUNT: i32 = 8;

/// Largest difference ratio accepted for extrapolation.
const MAX_CONTRACTION: f64 = 0.9;

/// The source term `f₀`.
#[derive(Debug, Clone, PartialEq)]
pub enum Forcing {
    Power(PowerSum),
    /// Piecewise-linear interpolation of samples covering `[0, T]`.
    Tabulated(SampledFunction),
}

impl Forcing {
    pub fn eval(&self, t: f64) -> Result<f64> {
        match self {
            Forcing::Power(p) => Ok(p.eval(t)),
            Forcing::Tabulated(s) => s.interpolate(t),
        }
    }
}

type NonlinearFn = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// The reaction term `f(t, v)`. It must be deterministic and locally
/// Lipschitz in `v`.
#[derive(Clone)]
pub struct Nonlinearity {
    name: String,
    f: Arc<NonlinearFn>,
}

impl fmt::Debug for Nonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Nonlinearity").field("name", &self.name).finish()
    }
}

impl Nonlinearity {
    pub fn new(name: impl Into<String>, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn none() -> Self {
        Self::new("none", |_, _| 0.0)
    }

    /// `c · sin(v)`.
    pub fn sin_damped(c: f64) -> Self {
        Self::new(format!("{c}*sin(v)"), move |_, v| c * v.sin())
    }

    /// `Σ c_k v^k` from ascending coefficients.
    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        Self::new(format!("polynomial{coeffs:?}"), move |_, v| {
            coeffs.iter().rev().fold(0.0, |acc, c| acc * v + c)
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, t: f64, v: f64) -> f64 {
        (self.f)(t, v)
    }
}

#[derive(Debug, Clone)]
pub struct FodeProblem {
    fdo: FdoDescriptor,
    kernel: PowerSum,
    forcing: Forcing,
    nonlinearity: Nonlinearity,
    v0: f64,
    horizon: f64,
}

impl FodeProblem {
    pub fn new(
        fdo: FdoDescriptor,
        kernel: PowerSum,
        forcing: Forcing,
        nonlinearity: Nonlinearity,
        v0: f64,
        horizon: f64,
    ) -> Result<Self> {
        if fdo.kind() != FdoKind::TypeI {
            return Err(Error::invalid("problem", "only first-kind operators can be solved"));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::invalid("problem", format!("horizon {horizon} is not positive")));
        }
        if !v0.is_finite() {
            return Err(Error::invalid("problem", "initial value is not finite"));
        }
        if let Forcing::Tabulated(s) = &forcing {
            if s.end() < horizon {
                return Err(Error::invalid(
                    "problem",
                    format!("tabulated forcing ends at {} before the horizon {horizon}", s.end()),
                ));
            }
        }
        Ok(Self {
            fdo,
            kernel,
            forcing,
            nonlinearity,
            v0,
            horizon,
        })
    }

    pub fn fdo(&self) -> &FdoDescriptor {
        &self.fdo
    }

    pub fn kernel(&self) -> &PowerSum {
        &self.kernel
    }

    pub fn forcing(&self) -> &Forcing {
        &self.forcing
    }

    pub fn nonlinearity(&self) -> &Nonlinearity {
        &self.nonlinearity
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// `f₀(0) + f(0, v₀) − v₀`, whose vanishing makes the order unidentifiable.
    pub fn initial_drift(&self) -> Result<f64> {
        Ok(self.forcing.eval(0.0)? + self.nonlinearity.eval(0.0, self.v0) - self.v0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FodeSolution {
    h: f64,
    values: Vec<f64>,
    iterations: Vec<u32>,
}

impl FodeSolution {
    pub fn step(&self) -> f64 {
        self.h
    }

    /// `v_0, v_1, …, v_N`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.values.len()).map(|n| n as f64 * self.h).collect()
    }

    /// Newton iterations spent at each node (0 for the initial node).
    pub fn iterations(&self) -> &[u32] {
        &self.iterations
    }

    pub fn to_sampled(&self) -> Result<SampledFunction> {
        SampledFunction::new(self.times(), self.values.clone())
    }
}

/// Solves the scalar equation `g(v) = 0` starting from `start`. Returns the
/// root and the number of Newton iterations, or `None`.
fn solve_scalar(g: &dyn Fn(f64) -> f64, start: f64) -> Option<(f64, u32)> {
    let mut v = start;
    let mut gv = g(v);
    if !gv.is_finite() {
        return None;
    }
    for it in 1..=MAX_ITERATIONS {
        let delta = 1e-7 * (1.0 + v.abs());
        let dg = (g(v + delta) - g(v - delta)) / (2.0 * delta);
        if !(dg.is_finite() && dg != 0.0) {
            return None;
        }
        let step = gv / dg;
        let mut damping = 1.0;
        let (mut v_new, mut g_new) = (v - step, g(v - step));
        while !(g_new.abs() <= gv.abs()) && damping > 1e-4 {
            damping *= 0.5;
            v_new = v - damping * step;
            g_new = g(v_new);
        }
        if !g_new.is_finite() {
            return None;
        }
        let moved = (v_new - v).abs();
        v = v_new;
        gv = g_new;
        if moved <= NEWTON_TOLERANCE * (1.0 + v.abs()) || gv == 0.0 {
            return Some((v, it));
        }
    }
    None
}

fn bisect(g: &dyn Fn(f64) -> f64, center: f64) -> Option<f64> {
    let w = center.abs().max(1.0);
    let (mut lo, mut hi) = (center - w, center + w);
    let (mut glo, ghi) = (g(lo), g(hi));
    if !(glo.is_finite() && ghi.is_finite()) || glo.signum() == ghi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm == 0.0 || (hi - lo) <= NEWTON_TOLERANCE * (1.0 + mid.abs()) {
            return Some(mid);
        }
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Advances from `v₀` on the uniform grid `t_n = n h`, `n ≤ ⌊T/h⌋`.
pub fn solve(problem: &FodeProblem, h: f64) -> Result<FodeSolution> {
    if !(h > 0.0 && h <= problem.horizon / 4.0) {
        return Err(Error::domain(
            "solve",
            format!("step {h} must be positive and at most a quarter of the horizon {}", problem.horizon),
        ));
    }
    let n_steps = (problem.horizon / h * (1.0 + 1e-12)).floor() as usize;
    let orders = problem.fdo.orders();
    let coeffs = problem.fdo.coeffs();

    // L1 weights per order: D^ν v(t_n) = Σ_k (v_{k+1} − v_k) w[n−k] with w = m0/(h Γ(1−ν))
    let caputo_weights: Vec<Vec<f64>> = orders
        .iter()
        .map(|&nu| {
            let (m0, _) = uniform_moments(h, n_steps, -nu);
            let s = 1.0 / (h * gamma_positive(1.0 - nu));
            m0.into_iter().map(|m| m * s).collect()
        })
        .collect();
    // product-integration weights per kernel term (coefficient folded in)
    let kernel_moments: Vec<(Vec<f64>, Vec<f64>)> = problem
        .kernel
        .terms()
        .iter()
        .map(|&(c, e)| {
            let (m0, m1) = uniform_moments(h, n_steps, e);
            (
                m0.iter().zip(&m1).map(|(a, b)| c * (a - b / h)).collect(),
                m1.iter().map(|b| c * b / h).collect(),
            )
        })
        .collect();

    let mut v = Vec::with_capacity(n_steps + 1);
    v.push(problem.v0);
    let mut iterations = vec![0];
    for n in 1..=n_steps {
        let t = n as f64 * h;
        let prev = v[n - 1];
        let mut hist = 0.0;
        let mut lin = 1.0;
        for (w, r) in caputo_weights.iter().zip(coeffs) {
            let rt = r.eval(t);
            let past: f64 = (0..n - 1).map(|k| (v[k + 1] - v[k]) * w[n - k]).sum();
            hist += rt * (past - w[1] * prev);
            lin += rt * w[1];
        }
        for (left, right) in &kernel_moments {
            let past: f64 = (0..n - 1).map(|k| v[k] * left[n - k] + v[k + 1] * right[n - k]).sum();
            hist += past + prev * left[1];
            lin += right[1];
        }
        let rhs = problem.forcing.eval(t)?;
        let g = |x: f64| lin * x + hist - rhs - problem.nonlinearity.eval(t, x);
        let (vn, its) = match solve_scalar(&g, prev) {
            Some(r) => r,
            None => match bisect(&g, prev) {
                Some(root) => (root, MAX_ITERATIONS),
                None if !hist.is_finite() || !g(prev).is_finite() => return Err(Error::Divergence { node: n, t }),
                None => return Err(Error::Nonconvergence { node: n, t }),
            },
        };
        if !vn.is_finite() {
            return Err(Error::Divergence { node: n, t });
        }
        v.push(vn);
        iterations.push(its);
    }
    Ok(FodeSolution { h, values: v, iterations })
}

/// Recovers the leading order from a computed solution through the ratio
/// limit at `T·2^{-m}`, `m = 1..8`.
///
/// The estimate comes from the finest consecutive probe triple whose
/// differences contract, extrapolated to `t = 0`. When no triple contracts
/// the probes are dominated by discretization error near `t = 0`, and the
/// probe with the smallest change to its neighbour is returned.
pub fn verify_linking(solution: &FodeSolution, problem: &FodeProblem) -> Result<f64> {
    let drift = problem.initial_drift()?;
    let scale = problem.forcing.eval(0.0)?.abs() + problem.v0.abs() + 1.0;
    if drift.abs() <= 1e-12 * scale {
        return Err(Error::Precondition(format!(
            "f0(0) + f(0, v0) - v0 = {drift:e} vanishes, so the order is not identifiable"
        )));
    }
    let sampled = solution.to_sampled()?;
    let t_end = sampled.end();
    let probes: Vec<f64> = (1..=PROBE_COUNT).map(|m| t_end * 0.5f64.powi(m)).collect();
    let ratios = ratio_limit_probe(&sampled, problem.v0, &probes)?;
    Ok(extrapolate_probes(&ratios))
}

fn extrapolate_probes(ratios: &[f64]) -> f64 {
    for w in ratios.windows(3).rev() {
        let q = (w[2] - w[1]) / (w[1] - w[0]);
        if q > 0.0 && q <= MAX_CONTRACTION {
            return extrapolate_to_zero([w[0], w[1], w[2]]);
        }
    }
    let k = (0..ratios.len() - 1)
        .min_by(|&a, &b| {
            let da = (ratios[a + 1] - ratios[a]).abs();
            let db = (ratios[b + 1] - ratios[b]).abs();
            da.total_cmp(&db)
        })
        .unwrap_or(0);
    ratios[k]
}
