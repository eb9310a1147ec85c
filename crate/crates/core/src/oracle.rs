//! Independent numerical oracles used only by tests.
//!
//! Everything here is brute force: composite Gauss-Legendre quadrature on
//! uniform or geometrically graded panels. None of it shares code with the
//! library paths it is used to check.

#![allow(dead_code)]

use std::sync::OnceLock;

const GL_ORDER: usize = 20;

fn legendre_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    let (mut q0, mut q1) = (1.0, x);
                    for k in 2..=n {
                        let q2 = ((2 * k - 1) as f64 * x * q1 - (k - 1) as f64 * q0) / k as f64;
                        q0 = q1;
                        q1 = q2;
                    }
                    let dq = n as f64 * (x * q1 - q0) / (x * x - 1.0);
                    nodes[i] = x;
                    weights[i] = 2.0 / ((1.0 - x * x) * dq * dq);
                    break;
                }
            }
        }
        (nodes, weights)
    })
}

/// Gauss-Legendre on a single panel.
pub fn gl_panel(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (nodes, weights) = legendre_rule();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    nodes
        .iter()
        .zip(weights)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Composite Gauss-Legendre over `panels` equal panels.
pub fn integrate_composite(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| gl_panel(&f, a + k as f64 * h, a + (k + 1) as f64 * h))
        .sum()
}

/// Panels halving toward `a`; suited to integrands with algebraic endpoint
/// behaviour at `a` that stay bounded.
pub fn integrate_graded_left(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mut total = 0.0;
    let mut right = b;
    for _ in 0..80 {
        let left = a + 0.5 * (right - a);
        total += gl_panel(&f, left, right);
        right = left;
    }
    total
}

pub fn integrate_graded_right(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    integrate_graded_left(|s| f(a + b - s), a, b)
}

pub fn integrate_singular_both_ends(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    integrate_graded_left(&f, a, mid) + integrate_graded_right(&f, mid, b)
}

/// `Γ(x)` from the alternating series of `∫₀¹ t^(x-1) e^(-t) dt` plus composite
/// quadrature of the smooth tail on `[1, ∞)`.
pub fn gamma_by_quadrature(x: f64) -> f64 {
    let mut head = 0.0;
    let mut fact = 1.0;
    for k in 0..60 {
        if k > 0 {
            fact *= k as f64;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        head += sign / (fact * (k as f64 + x));
    }
    let upper = 60.0 + 3.0 * x;
    let panels = (upper - 1.0).ceil() as usize * 2;
    let tail = integrate_composite(|t| ((x - 1.0) * t.ln() - t).exp(), 1.0, upper, panels);
    head + tail
}

/// `∫₀^{t_k} t^{-ρ} g(t) dt` after the substitution `t = t_k u^{1/(1-ρ)}`, which
/// removes the weight singularity.
pub fn weighted_integral(g: impl Fn(f64) -> f64, rho: f64, t_k: f64, panels: usize) -> f64 {
    let p = 1.0 / (1.0 - rho);
    let scale = t_k.powf(1.0 - rho) / (1.0 - rho);
    scale * integrate_composite(|u| g(t_k * u.powf(p)), 0.0, 1.0, panels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials() {
        let v = gl_panel(&|x: f64| x.powi(7) - 3.0 * x * x, 0.0, 2.0);
        assert!((v - (32.0 - 8.0)).abs() < 1e-12);
    }

    #[test]
    fn gamma_oracle_integers() {
        assert!((gamma_by_quadrature(5.0) - 24.0).abs() < 1e-12);
        assert!((gamma_by_quadrature(0.5) - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }
}
