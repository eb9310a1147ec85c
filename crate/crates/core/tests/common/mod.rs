//! Shared helpers for the integration tests: a brute-force quadrature oracle
//! and a runner for the command-line binary.

#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};
use std::sync::OnceLock;

const GL_ORDER: usize = 24;

fn legendre_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let eval = |x: f64| {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
        };
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = eval(x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = eval(x);
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        (nodes, weights)
    })
}

pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let (nodes, weights) = legendre_rule();
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * h;
        let part: f64 = nodes.iter().zip(weights).map(|(x, w)| w * f(mid + 0.5 * h * x)).sum();
        total += 0.5 * h * part;
    }
    total
}

/// `∫₀^{t_k} t^{-ρ} g(t) dt` through `t = t_k u^{1/(1-ρ)}`.
pub fn weighted_integral(g: impl Fn(f64) -> f64, rho: f64, t_k: f64, panels: usize) -> f64 {
    let p = 1.0 / (1.0 - rho);
    t_k.powf(1.0 - rho) / (1.0 - rho) * integrate(|u| g(t_k * u.powf(p)), 0.0, 1.0, panels)
}

pub fn empirical_orders(errs: &[f64]) -> Vec<f64> {
    errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

/// Runs the binary in `dir` with `FRACORDER_THREADS` set (or removed).
pub fn run_bin(dir: &Path, args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fracorder"));
    cmd.current_dir(dir).args(args);
    match threads {
        Some(t) => cmd.env("FRACORDER_THREADS", t),
        None => cmd.env_remove("FRACORDER_THREADS"),
    };
    cmd.output().expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}
