//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

mod common;

use std::fs;
use std::time::Instant;

use common::{empirical_orders, run_bin, weighted_integral};
use fracorder::fodesolver::{solve, verify_linking, FodeProblem, Forcing, Nonlinearity};
use fracorder::fraccalc::{
    caputo_at_zero, caputo_l1, gamma_fn, initial_identity_residual, rl_integral, PowerSum, SampledFunction,
};
use fracorder::obsmodel::{FdoDescriptor, FdoKind, NoiseSpec};
use fracorder::orderest::{ratio_estimate, LogSelection, PipelineOptions, RegGrids, ThatCriterion};
use fracorder::presets::{PresetRun, Scenario};
use fracorder::regbasis::{gram_matrix, BasisSpec};
use fracorder::tables::{table_sweep, TableId, TableRow, NOISE_COLUMNS, NU_ROWS};
use fracorder::tikhonov::FitModel;

const RATIO_TOL: f64 = 0.02;
const LOG_TOL: f64 = 0.03;
const TABLE_SECONDS: f64 = 30.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn g(x: f64) -> f64 {
    gamma_fn(x).unwrap()
}

fn uniform(n: usize, f: impl Fn(f64) -> f64) -> SampledFunction {
    SampledFunction::uniform(1.0 / n as f64, n, f).unwrap()
}

fn within(v: Option<f64>, r: f64, tol: f64) -> bool {
    v.is_some_and(|x| (x - r).abs() <= tol)
}

fn criterion_1() -> Outcome {
    let settings = [
        ("reuse_ratio", PipelineOptions::table_presets()),
        (
            "independent",
            PipelineOptions {
                log_selection: LogSelection::Independent,
                that_criterion: ThatCriterion::SweepStability,
            },
        ),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for id in TableId::ALL {
        let mut best: Option<(usize, usize, &str)> = None;
        let mut misses = Vec::new();
        for (name, options) in settings {
            let start = Instant::now();
            let rows = table_sweep(id, options, None).unwrap();
            let secs = start.elapsed().as_secs_f64();
            pass &= secs < TABLE_SECONDS;
            let r = rows.iter().filter(|r| within(r.nu_ratio, r.ref_ratio, RATIO_TOL)).count();
            let l = rows.iter().filter(|r| within(r.nu_log, r.ref_log, LOG_TOL)).count();
            if best.is_none_or(|(br, bl, _)| r + l > br + bl) {
                best = Some((r, l, name));
                misses = rows
                    .iter()
                    .filter(|x| !within(x.nu_ratio, x.ref_ratio, RATIO_TOL) || !within(x.nu_log, x.ref_log, LOG_TOL))
                    .map(|x| format!("({} {} {})", x.nu_true, x.noise.label(), x.epsilon))
                    .collect();
            }
        }
        let (r, l, name) = best.unwrap();
        pass &= r == 54 && l == 54;
        let miss = if misses.is_empty() { String::new() } else { format!(" misses {}", misses.join(" ")) };
        parts.push(format!("table {} [{name}] ratio {r}/54 log {l}/54{miss}", id.number()));
    }
    Outcome { pass, detail: parts.join("; ") }
}

fn column_means(rows: &[TableRow], noise: fracorder::obsmodel::NoiseKind, eps: f64) -> (f64, f64) {
    let cells: Vec<&TableRow> = rows.iter().filter(|r| r.noise == noise && r.epsilon == eps).collect();
    let mean = |f: &dyn Fn(&TableRow) -> Option<f64>| {
        cells.iter().map(|r| f(r).map_or(f64::INFINITY, |v| (v - r.nu_true).abs())).sum::<f64>() / cells.len() as f64
    };
    (mean(&|r| r.nu_ratio), mean(&|r| r.nu_log))
}

fn criterion_2() -> Outcome {
    let mut pass = true;
    let mut worst = f64::INFINITY;
    let mut count = 0;
    for id in TableId::ALL {
        let rows = table_sweep(id, PipelineOptions::table_presets(), None).unwrap();
        for noise in NOISE_COLUMNS {
            for eps in id.epsilons() {
                let (mr, ml) = column_means(&rows, noise, eps);
                pass &= mr <= ml;
                worst = worst.min(ml - mr);
                count += 1;
            }
        }
    }
    Outcome {
        pass,
        detail: format!("{count} columns, smallest margin mean|log| - mean|ratio| = {worst:.4}"),
    }
}

fn criterion_3() -> Outcome {
    let t_k = 2.1e-3;
    let thats = RegGrids::standard(t_k).thats();
    let mut worst: f64 = 0.0;
    for &nu in &NU_ROWS {
        for c in [0.5, 1.0, 3.0] {
            let spec = BasisSpec::new(vec![nu], 1, 0.99, t_k).unwrap();
            let model = FitModel::from_coefficients(spec, vec![c]).unwrap();
            let fdo = FdoDescriptor::single(FdoKind::TypeI, nu, PowerSum::constant(1.0)).unwrap();
            for &that in &thats {
                let est = ratio_estimate(&model, 0.0, &fdo, that).unwrap();
                worst = worst.max((est - nu).abs());
            }
        }
    }
    Outcome {
        pass: worst <= 1e-12,
        detail: format!("max |estimate - nu| = {worst:.2e}"),
    }
}

fn criterion_4() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    for (scenario, kind) in [
        (Scenario::Example71, FdoKind::TypeI),
        (Scenario::Example71, FdoKind::TypeII),
        (Scenario::Example72, FdoKind::TypeI),
    ] {
        for &nu0 in &NU_ROWS {
            let run = PresetRun::new(scenario, nu0, kind, NoiseSpec::none()).unwrap();
            let err = match run.run(PipelineOptions::default()) {
                Ok(r) => (r.nu_ratio() - nu0).abs(),
                Err(_) => f64::INFINITY,
            };
            worst = worst.max(err);
            runs += 1;
        }
    }
    Outcome {
        pass: worst <= 1e-2,
        detail: format!("{runs} runs, max |nu_ratio - nu0| = {worst:.2e}"),
    }
}

fn criterion_5() -> Outcome {
    let mut fails = Vec::new();
    let mut min_margin = f64::INFINITY;
    for &mu in &[0.4, 0.7, 1.0] {
        for &nu in &[0.25, 0.5, 0.75] {
            let exact = g(1.0 + mu) / g(1.0 + mu - nu);
            let errs: Vec<f64> = [128, 256, 512, 1024]
                .iter()
                .map(|&n| (caputo_l1(&uniform(n, |t| t.powf(mu)), nu).unwrap().values()[n] - exact).abs())
                .collect();
            if errs.iter().all(|&e| e < 1e-12) {
                continue;
            }
            let bound = (2.0 - nu).min(1.0 + mu - nu) - 0.3;
            let q = empirical_orders(&errs).into_iter().fold(f64::INFINITY, f64::min);
            min_margin = min_margin.min(q - bound);
            if q < bound {
                fails.push(format!("power rule mu={mu} nu={nu} order {q:.3}"));
            }
        }
    }
    for nu in [0.1, 0.5, 0.9] {
        if caputo_l1(&uniform(50, |_| 2.5), nu).unwrap().values().iter().any(|&v| v != 0.0) {
            fails.push(format!("constant nu={nu}"));
        }
    }
    let (a, b) = (0.3, 0.45);
    let gaps: Vec<f64> = [256, 512, 1024, 2048]
        .iter()
        .map(|&n| {
            let f = uniform(n, |t| 1.0 + t * t);
            let twice = rl_integral(&rl_integral(&f, a).unwrap(), b).unwrap();
            let once = rl_integral(&f, a + b).unwrap();
            twice.values().iter().zip(once.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
        })
        .collect();
    if !(gaps[0] < 1e-2 && empirical_orders(&gaps).iter().all(|&q| q >= a + b - 0.1)) {
        fails.push(format!("semigroup {gaps:?}"));
    }

    let t_k = 3e-3;
    let spec = BasisSpec::with_reference_order(0.25, t_k).unwrap();
    let nj = spec.jacobi_count();
    let e = gram_matrix(&BasisSpec::new(vec![], nj, spec.rho, t_k).unwrap()).unwrap();
    let mut ortho: f64 = 0.0;
    for l in 0..nj {
        for m in 0..nj {
            if l != m {
                ortho = ortho.max(e[(l, m)].abs() / (e[(l, l)] * e[(m, m)]).sqrt());
            }
        }
    }
    if ortho > 1e-10 {
        fails.push(format!("orthogonality {ortho:.2e}"));
    }
    let h = spec.functions().unwrap();
    let e = gram_matrix(&spec).unwrap();
    let mut quad: f64 = 0.0;
    for l in 0..h.len() {
        for m in 0..h.len() {
            let q = weighted_integral(|t| h[l].eval(t) * h[m].eval(t), spec.rho, t_k, 4000);
            quad = quad.max((e[(l, m)] - q).abs() / (e[(l, l)] * e[(m, m)]).sqrt());
        }
    }
    if quad > 1e-8 {
        fails.push(format!("gram vs quadrature {quad:.2e}"));
    }
    Outcome {
        pass: fails.is_empty(),
        detail: if fails.is_empty() {
            format!("order margin {min_margin:.3}, orthogonality {ortho:.1e}, gram vs quadrature {quad:.1e}")
        } else {
            fails.join("; ")
        },
    }
}

fn criterion_6() -> Outcome {
    let nu0 = 0.6;
    let ns = [256, 512, 1024, 2048, 4096];
    let v = |n: usize| uniform(n, |t| 0.3 + t.powf(nu0) / g(1.0 + nu0));
    let lower: Vec<f64> = ns.iter().map(|&n| caputo_at_zero(&v(n), 0.2).unwrap().abs()).collect();
    let coeffs = [PowerSum::constant(1.0), PowerSum::constant(0.5)];
    let residual: Vec<f64> =
        ns.iter().map(|&n| initial_identity_residual(&v(n), &[nu0, 0.2], &coeffs).unwrap().residual).collect();
    let lower_ok = lower.windows(2).all(|w| w[1] < w[0]) && lower[ns.len() - 1] < 1e-2;
    let halving = residual.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
    Outcome {
        pass: lower_ok && halving <= 0.5,
        detail: format!(
            "|D^0.2 v(0)| {:.2e} -> {:.2e}, worst residual ratio {halving:.3}",
            lower[0],
            lower[ns.len() - 1]
        ),
    }
}

fn manufactured(nu0: f64, v0: f64) -> (FodeProblem, impl Fn(f64) -> f64) {
    let f0 = PowerSum::new(vec![
        (1.0 + v0, 0.0),
        (1.0 / g(1.0 + nu0), nu0),
        (1.5 * v0, 2.0 / 3.0),
        (g(2.0 / 3.0) / g(5.0 / 3.0 + nu0), 2.0 / 3.0 + nu0),
    ])
    .unwrap();
    let problem = FodeProblem::new(
        FdoDescriptor::single(FdoKind::TypeI, nu0, PowerSum::constant(1.0)).unwrap(),
        PowerSum::new(vec![(1.0, -1.0 / 3.0)]).unwrap(),
        Forcing::Power(f0),
        Nonlinearity::none(),
        v0,
        1.0,
    )
    .unwrap();
    (problem, move |t: f64| v0 + t.powf(nu0) / g(1.0 + nu0))
}

fn criterion_7() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for nu0 in [0.3, 0.5, 0.7] {
        let (p, exact) = manufactured(nu0, 0.5);
        let errs: Vec<f64> = [64, 128, 256, 512, 1024]
            .iter()
            .map(|&n| {
                let s = solve(&p, 1.0 / n as f64).unwrap();
                s.times().iter().zip(s.values()).map(|(&t, v)| (v - exact(t)).abs()).fold(0.0, f64::max)
            })
            .collect();
        let q = empirical_orders(&errs).into_iter().fold(f64::INFINITY, f64::min);
        let bound = 2.0 - nu0 - 0.3;
        let est = verify_linking(&solve(&p, 1.0 / 4096.0).unwrap(), &p).unwrap();
        let order_ok = q >= bound;
        let link_ok = (est - nu0).abs() <= 0.02;
        pass &= order_ok && link_ok;
        parts.push(format!(
            "nu0={nu0}: order {q:.2} (need {bound:.2}) {}, recovered {est:.4} {}",
            if order_ok { "ok" } else { "FAIL" },
            if link_ok { "ok" } else { "FAIL" }
        ));
    }
    let (mut flat, _) = manufactured(0.5, 0.5);
    flat = FodeProblem::new(
        flat.fdo().clone(),
        flat.kernel().clone(),
        Forcing::Power(PowerSum::constant(0.5)),
        Nonlinearity::none(),
        0.5,
        1.0,
    )
    .unwrap();
    let rejected = matches!(
        verify_linking(&solve(&flat, 1.0 / 256.0).unwrap(), &flat),
        Err(fracorder::Error::Precondition(_))
    );
    pass &= rejected;
    parts.push(format!("degenerate case rejected: {rejected}"));
    Outcome { pass, detail: parts.join("; ") }
}

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(
        d.join("est.json"),
        r#"{"scenario": "example71", "nu_true": 0.4, "fdo_kind": "II", "noise": {"kind": "N2", "epsilon": 0.3}}"#,
    )
    .unwrap();
    fs::write(
        d.join("fode.json"),
        r#"{"fdo": {"kind": "I", "orders": [0.5, 0.2], "coeffs": [[[1.0, 0.0], [0.5, 1.0]], [[0.3, 0.0]]]},
            "kernel": [[0.5, -0.5]], "forcing": [[2.0, 0.0], [1.0, 1.0]],
            "nonlinearity": {"kind": "sin_damped", "coeff": -0.1},
            "v0": 0.5, "horizon": 1.0, "step": 0.001, "out": "sol.csv"}"#,
    )
    .unwrap();
    let rows: String = (0..=40).map(|k| format!("{},{}\n", k as f64 / 40.0, (k as f64 / 40.0).powf(0.3))).collect();
    fs::write(d.join("in.csv"), format!("t,v\n{rows}")).unwrap();

    let mut pass = true;
    let mut files: Vec<Vec<u8>> = Vec::new();
    let threads = [None, Some("0"), Some("1"), Some("4")];
    let mut runs = 0;
    for (k, t) in threads.iter().enumerate() {
        let out = format!("run{k}");
        let cmds: [Vec<String>; 4] = [
            vec!["table".into(), "--id".into(), "2".into(), "--out".into(), format!("{out}.csv")],
            vec!["estimate".into(), "--config".into(), "est.json".into(), "--out".into(), out.clone()],
            vec!["fode".into(), "--config".into(), "fode.json".into()],
            vec!["caputo".into(), "--nu".into(), "0.6".into(), "--in".into(), "in.csv".into(), "--out".into(), format!("{out}-d.csv")],
        ];
        let mut blob = Vec::new();
        for c in &cmds {
            let args: Vec<&str> = c.iter().map(String::as_str).collect();
            let o = run_bin(d, &args, *t);
            pass &= o.status.success();
            blob.extend(o.stdout);
            runs += 1;
        }
        for f in [
            format!("{out}.csv"),
            format!("{out}.diff.csv"),
            format!("{out}/report.json"),
            format!("{out}/diagnostics.csv"),
            format!("{out}/observation.csv"),
            "sol.csv".to_string(),
            format!("{out}-d.csv"),
        ] {
            blob.extend(fs::read(d.join(&f)).unwrap_or_default());
        }
        files.push(blob);
    }
    let identical = files.windows(2).all(|w| w[0] == w[1]);
    Outcome {
        pass: pass && identical,
        detail: format!("{runs} invocations across FRACORDER_THREADS unset/0/1/4, outputs identical: {identical}"),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("table reproduction", criterion_1),
        ("ratio more accurate than log", criterion_2),
        ("ratio formula exact on powers", criterion_3),
        ("clean-data recovery", criterion_4),
        ("fractional-calculus suite", criterion_5),
        ("small-time identity numerics", criterion_6),
        ("ODE solver", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        failed += usize::from(!o.pass);
        println!("criterion {} ({name}): {} | {}", k + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
