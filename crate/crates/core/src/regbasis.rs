//! The approximation space for the regularized fit: a few power functions
//! `t^{b_j}` followed by shifted Jacobi polynomials orthogonal in the weight
//! `t^{-ϱ}` on `[0, t_K]`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fraccalc::special::{binom_int, binom_real};
use crate::fraccalc::PowerSum;

/// Largest Jacobi degree accepted by [`jacobi_poly`].
pub const MAX_JACOBI_DEGREE: usize = 12;

/// Default basis size 𝔓.
pub const DEFAULT_TOTAL_SIZE: usize = 9;

/// Default weight exponent ϱ.
pub const DEFAULT_RHO: f64 = 0.99;

/// Default power exponents as multiples of a reference order.
pub const DEFAULT_MULTIPLES: [f64; 3] = [1.75, 1.45, 1.15];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisSpec {
    /// `b₁ ≥ b₂ ≥ … ≥ b_𝔍`, all in `(0, 1)`.
    pub power_exponents: Vec<f64>,
    /// 𝔓; the last `𝔓 - 𝔍` members are Jacobi polynomials of degree `0, 1, …`.
    pub total_size: usize,
    pub rho: f64,
    pub t_k: f64,
}

impl BasisSpec {
    pub fn new(power_exponents: Vec<f64>, total_size: usize, rho: f64, t_k: f64) -> Result<Self> {
        let spec = Self {
            power_exponents,
            total_size,
            rho,
            t_k,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// 𝔓 = 9, ϱ = 0.99 and `b = (1.75, 1.45, 1.15) · reference_order`.
    pub fn with_reference_order(reference_order: f64, t_k: f64) -> Result<Self> {
        Self::new(
            DEFAULT_MULTIPLES.iter().map(|m| m * reference_order).collect(),
            DEFAULT_TOTAL_SIZE,
            DEFAULT_RHO,
            t_k,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(b) = self.power_exponents.iter().find(|b| !(**b > 0.0 && **b < 1.0)) {
            return Err(Error::invalid("basis", format!("power exponent {b} outside (0, 1)")));
        }
        if self.power_exponents.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::invalid("basis", "power exponents must be decreasing"));
        }
        if self.total_size < self.power_exponents.len() || self.total_size == 0 {
            return Err(Error::invalid(
                "basis",
                format!(
                    "total size {} below the {} power members or zero",
                    self.total_size,
                    self.power_exponents.len()
                ),
            ));
        }
        if self.jacobi_count() > MAX_JACOBI_DEGREE + 1 {
            return Err(Error::invalid(
                "basis",
                format!("{} Jacobi members exceed degree {MAX_JACOBI_DEGREE}", self.jacobi_count()),
            ));
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(Error::invalid("basis", format!("weight exponent {} outside (0, 1)", self.rho)));
        }
        if !(self.t_k > 0.0 && self.t_k.is_finite()) {
            return Err(Error::invalid("basis", format!("right endpoint {} is not positive", self.t_k)));
        }
        Ok(())
    }

    pub fn jacobi_count(&self) -> usize {
        self.total_size.saturating_sub(self.power_exponents.len())
    }

    /// All members `h_1, …, h_𝔓` in order.
    pub fn functions(&self) -> Result<Vec<BasisFunction>> {
        self.validate()?;
        let mut out: Vec<BasisFunction> = self
            .power_exponents
            .iter()
            .map(|&b| BasisFunction { terms: vec![(1.0, b)] })
            .collect();
        for j in 0..self.jacobi_count() {
            out.push(jacobi_poly(j, self.rho, self.t_k)?);
        }
        Ok(out)
    }
}

/// A basis member as a sum of monomials `Σ c t^p` with `p ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisFunction {
    terms: Vec<(f64, f64)>,
}

impl BasisFunction {
    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.as_power_sum().eval(t)
    }

    /// `∫₀^t`.
    pub fn antiderivative(&self, t: f64) -> f64 {
        self.as_power_sum().antiderivative(t)
    }

    pub fn as_power_sum(&self) -> PowerSum {
        PowerSum::new(self.terms.clone()).expect("basis exponents are nonnegative")
    }
}

/// `Σ_{i=0}^{j} C(j,i) C(j-ϱ, j-i) (s-1)^{j-i} s^i` with `s = t/t_K`, expanded
/// into monomials of `t`.
pub fn jacobi_poly(j: usize, rho: f64, t_k: f64) -> Result<BasisFunction> {
    if j > MAX_JACOBI_DEGREE {
        return Err(Error::invalid(
            "basis",
            format!("Jacobi degree {j} exceeds {MAX_JACOBI_DEGREE}"),
        ));
    }
    let mut c = vec![0.0; j + 1];
    for i in 0..=j {
        let m = j - i;
        let a = binom_int(j as u32, i as u32) * binom_real(j as f64 - rho, m as u32)?;
        for k in 0..=m {
            let sign = if (m - k) % 2 == 0 { 1.0 } else { -1.0 };
            c[i + k] += a * binom_int(m as u32, k as u32) * sign;
        }
    }
    Ok(BasisFunction {
        terms: c
            .into_iter()
            .enumerate()
            .map(|(p, cp)| (cp / t_k.powi(p as i32), p as f64))
            .collect(),
    })
}

/// `∫₀^{t_K} t^{-ϱ} f g dt` in closed form.
pub fn weighted_inner(f: &BasisFunction, g: &BasisFunction, rho: f64, t_k: f64) -> f64 {
    let mut acc = 0.0;
    for &(cf, pf) in &f.terms {
        for &(cg, pg) in &g.terms {
            let e = pf + pg + 1.0 - rho;
            acc += cf * cg * t_k.powf(e) / e;
        }
    }
    acc
}

/// The weighted Gram matrix `e_{l,m} = (h_l, h_m)`.
pub fn gram_matrix(spec: &BasisSpec) -> Result<DMatrix<f64>> {
    if spec.power_exponents.windows(2).any(|w| w[0] == w[1]) {
        log::warn!("repeated power exponents make the basis linearly dependent");
    }
    let h = spec.functions()?;
    let n = h.len();
    let mut e = DMatrix::zeros(n, n);
    for l in 0..n {
        for m in l..n {
            let v = weighted_inner(&h[l], &h[m], spec.rho, spec.t_k);
            e[(l, m)] = v;
            e[(m, l)] = v;
        }
    }
    Ok(e)
}

fn check_range(op: &'static str, spec: &BasisSpec, t: f64) -> Result<()> {
    if !(t >= 0.0 && t <= spec.t_k) {
        return Err(Error::domain(op, format!("t = {t} outside [0, {}]", spec.t_k)));
    }
    Ok(())
}

/// `h_l(t)` for every member.
pub fn eval_basis(spec: &BasisSpec, t: f64) -> Result<Vec<f64>> {
    check_range("eval_basis", spec, t)?;
    Ok(spec.functions()?.iter().map(|h| h.eval(t)).collect())
}

/// `∫₀^t h_l` for every member.
pub fn antideriv_basis(spec: &BasisSpec, t: f64) -> Result<Vec<f64>> {
    check_range("antideriv_basis", spec, t)?;
    Ok(spec.functions()?.iter().map(|h| h.antiderivative(t)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    const TK: f64 = 3e-3;

    fn default_spec() -> BasisSpec {
        BasisSpec::with_reference_order(0.25, TK).unwrap()
    }

    #[test]
    fn low_degree_members() {
        let p0 = jacobi_poly(0, 0.99, TK).unwrap();
        assert_eq!(p0.terms(), [(1.0, 0.0)]);
        let rho = 0.4;
        let p1 = jacobi_poly(1, rho, 2.0).unwrap();
        for &t in &[0.0, 0.7, 2.0] {
            let s = t / 2.0;
            assert!((p1.eval(t) - ((2.0 - rho) * s - (1.0 - rho))).abs() < 1e-15);
        }
        for j in 0..=MAX_JACOBI_DEGREE {
            let p = jacobi_poly(j, 0.99, TK).unwrap();
            let tol = if j <= 8 { 1e-9 } else { 1e-7 };
            assert!((p.eval(TK) - 1.0).abs() < tol, "degree {j}: {}", p.eval(TK));
        }
        assert!(jacobi_poly(13, 0.99, TK).is_err());
    }

    #[test]
    fn closed_form_inner_products() {
        let b = 0.2875;
        let f = BasisFunction { terms: vec![(1.0, b)] };
        let e = 2.0 * b + 1.0 - 0.99;
        assert_eq!(weighted_inner(&f, &f, 0.99, TK), TK.powf(e) / e);
        let one = jacobi_poly(0, 0.99, 1.0).unwrap();
        assert!((weighted_inner(&one, &one, 0.99, 1.0) - 100.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_members_are_orthogonal() {
        let spec = BasisSpec::new(vec![], 6, 0.99, TK).unwrap();
        let e = gram_matrix(&spec).unwrap();
        for l in 0..6 {
            for m in 0..6 {
                if l != m {
                    let scale = (e[(l, l)] * e[(m, m)]).sqrt();
                    assert!(e[(l, m)].abs() <= 1e-10 * scale, "({l},{m}) {}", e[(l, m)] / scale);
                }
            }
        }
        let p1 = jacobi_poly(1, 0.99, TK).unwrap();
        let p3 = jacobi_poly(3, 0.99, TK).unwrap();
        let q = oracle::weighted_integral(|t| p1.eval(t) * p3.eval(t), 0.99, TK, 4000);
        let scale = (weighted_inner(&p1, &p1, 0.99, TK) * weighted_inner(&p3, &p3, 0.99, TK)).sqrt();
        assert!(q.abs() < 1e-8 * scale);
    }

    #[test]
    fn gram_matches_quadrature() {
        let spec = default_spec();
        let h = spec.functions().unwrap();
        let e = gram_matrix(&spec).unwrap();
        for l in 0..h.len() {
            for m in 0..h.len() {
                let q = oracle::weighted_integral(|t| h[l].eval(t) * h[m].eval(t), spec.rho, TK, 4000);
                let scale = (e[(l, l)] * e[(m, m)]).sqrt();
                assert!((e[(l, m)] - q).abs() <= 1e-8 * scale, "({l},{m}): {} vs {q}", e[(l, m)]);
                if l == m || l < 3 || m < 3 {
                    assert!(((e[(l, m)] - q) / q).abs() <= 1e-8, "({l},{m}) relative");
                }
            }
        }
        assert!(e.clone().cholesky().is_some());
        assert_eq!(e, e.transpose());
    }

    #[test]
    fn single_power_member() {
        let spec = BasisSpec::new(vec![0.5], 1, 0.99, TK).unwrap();
        let e = gram_matrix(&spec).unwrap();
        assert_eq!(e.shape(), (1, 1));
        assert_eq!(e[(0, 0)], TK.powf(1.01) / 1.01);
    }

    #[test]
    fn evaluation_and_antiderivative() {
        let spec = default_spec();
        let at0 = eval_basis(&spec, 0.0).unwrap();
        assert!(at0[..3].iter().all(|&v| v == 0.0));
        for (j, v) in at0[3..].iter().enumerate() {
            assert_eq!(*v, jacobi_poly(j, 0.99, TK).unwrap().terms()[0].0);
        }
        assert!(antideriv_basis(&spec, 0.0).unwrap().iter().all(|&v| v == 0.0));
        let at_end = eval_basis(&spec, TK).unwrap();
        assert!(at_end[3..].iter().all(|v| (v - 1.0).abs() < 1e-9));
        assert!(eval_basis(&spec, 1.1 * TK).is_err());
        assert!(antideriv_basis(&spec, -1e-9).is_err());

        let half = BasisSpec::new(vec![0.5], 1, 0.99, 1.0).unwrap();
        let a = antideriv_basis(&half, 1e-3).unwrap()[0];
        assert!((a - 1e-3f64.powf(1.5) / 1.5).abs() < 1e-18);

        for &t in &[2e-4, 1e-3, 2.5e-3] {
            let dt = 1e-7 * TK;
            let hi = antideriv_basis(&spec, t + dt).unwrap();
            let lo = antideriv_basis(&spec, t - dt).unwrap();
            let v = eval_basis(&spec, t).unwrap();
            for l in 0..v.len() {
                let d = (hi[l] - lo[l]) / (2.0 * dt);
                assert!(((d - v[l]) / v[l]).abs() < 1e-6, "member {l} at {t}");
            }
        }
    }

    #[test]
    fn spec_validation() {
        assert!(BasisSpec::new(vec![0.2, 0.3], 4, 0.99, TK).is_err());
        assert!(BasisSpec::new(vec![1.2], 4, 0.99, TK).is_err());
        assert!(BasisSpec::new(vec![0.3], 0, 0.99, TK).is_err());
        assert!(BasisSpec::new(vec![0.3], 4, 1.0, TK).is_err());
        assert!(BasisSpec::new(vec![], 20, 0.5, TK).is_err());
        let dup = BasisSpec::new(vec![0.3, 0.3], 3, 0.5, TK).unwrap();
        assert!(gram_matrix(&dup).is_ok());
    }
}
