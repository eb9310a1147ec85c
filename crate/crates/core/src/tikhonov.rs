//! Penalized least squares in the basis of [`crate::regbasis`]:
//! `(QᵀQ + λE) a = Qᵀp`, with `E` the weighted Gram matrix.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::fraccalc::PowerSum;
use crate::obsmodel::Observation;
use crate::regbasis::{gram_matrix, BasisSpec};

/// Pivots below this fraction of the largest diagonal entry count as breakdown.
const PIVOT_TOLERANCE: f64 = 1e-300;

/// Rows `0, 1, …, K` hold `h_l(0), h_l(t_1), …, h_l(t_K)`.
pub fn design_matrix(obs: &Observation, spec: &BasisSpec) -> Result<DMatrix<f64>> {
    let t_max = obs.grid().last();
    if t_max > spec.t_k {
        return Err(Error::domain(
            "design_matrix",
            format!("grid reaches {t_max} beyond the basis endpoint {}", spec.t_k),
        ));
    }
    let h = spec.functions()?;
    let times: Vec<f64> = std::iter::once(0.0).chain(obs.times().iter().copied()).collect();
    Ok(DMatrix::from_fn(times.len(), h.len(), |r, c| h[c].eval(times[r])))
}

/// The right-hand side `(ψ₀, ψ_{1,ε}, …, ψ_{K,ε})`.
pub fn data_vector(obs: &Observation) -> DVector<f64> {
    DVector::from_iterator(
        obs.values().len() + 1,
        std::iter::once(obs.psi0()).chain(obs.values().iter().copied()),
    )
}

/// `A = L D Lᵀ` of a symmetric matrix with symmetric (diagonal) pivoting.
#[derive(Debug, Clone)]
pub struct PivotedLdl {
    l: DMatrix<f64>,
    d: Vec<f64>,
    perm: Vec<usize>,
}

impl PivotedLdl {
    pub fn factor(a: &DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::invalid("matrix", format!("{}x{} is not square", n, a.ncols())));
        }
        let mut w = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = (0..n).map(|i| a[(i, i)].abs()).fold(0.0, f64::max);
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| w[(i, i)].abs().total_cmp(&w[(j, j)].abs()).then(j.cmp(&i)))
                .expect("nonempty range");
            if p != k {
                w.swap_rows(k, p);
                w.swap_columns(k, p);
                perm.swap(k, p);
            }
            let pivot = w[(k, k)];
            if !(pivot.abs() > PIVOT_TOLERANCE * scale) || !pivot.is_finite() {
                return Err(Error::Singular(format!("pivot {pivot:e} at step {k}")));
            }
            for i in k + 1..n {
                w[(i, k)] /= pivot;
            }
            for j in k + 1..n {
                let ljk = w[(j, k)] * pivot;
                for i in j..n {
                    w[(i, j)] -= w[(i, k)] * ljk;
                }
                for i in j + 1..n {
                    w[(j, i)] = w[(i, j)];
                }
            }
        }
        let d = (0..n).map(|i| w[(i, i)]).collect();
        let l = DMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Greater => w[(i, j)],
            std::cmp::Ordering::Equal => 1.0,
            std::cmp::Ordering::Less => 0.0,
        });
        Ok(Self { l, d, perm })
    }

    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let n = self.d.len();
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                y[i] -= self.l[(i, j)] * y[j];
            }
        }
        for i in 0..n {
            y[i] /= self.d[i];
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                y[i] -= self.l[(j, i)] * y[j];
            }
        }
        let mut x = DVector::zeros(n);
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = y[k];
        }
        x
    }
}

/// Fitted coefficients together with the closed-form representation of
/// `ψ_ε(λ, t) = Σ a_l h_l(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FitModel {
    spec: BasisSpec,
    coeffs: Vec<f64>,
    lambda: f64,
    residual_norm: f64,
    monomials: PowerSum,
}

impl FitModel {
    /// A model with given coefficients and no associated data
    /// (`λ = 0`, zero residual).
    pub fn from_coefficients(spec: BasisSpec, coeffs: Vec<f64>) -> Result<Self> {
        Self::assemble(spec, coeffs, 0.0, 0.0)
    }

    fn assemble(spec: BasisSpec, coeffs: Vec<f64>, lambda: f64, residual_norm: f64) -> Result<Self> {
        if coeffs.len() != spec.total_size {
            return Err(Error::invalid(
                "model",
                format!("{} coefficients for {} basis members", coeffs.len(), spec.total_size),
            ));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("model", "non-finite coefficient"));
        }
        let mut terms = Vec::new();
        for (a, h) in coeffs.iter().zip(spec.functions()?) {
            terms.extend(h.terms().iter().map(|&(c, e)| (a * c, e)));
        }
        let monomials = PowerSum::new(terms)?;
        Ok(Self {
            spec,
            coeffs,
            lambda,
            residual_norm,
            monomials,
        })
    }

    pub fn spec(&self) -> &BasisSpec {
        &self.spec
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `‖Q a − p‖₂`.
    pub fn residual_norm(&self) -> f64 {
        self.residual_norm
    }

    /// The model as a sum of monomials in `t`.
    pub fn monomials(&self) -> &PowerSum {
        &self.monomials
    }

    fn check(&self, op: &'static str, t: f64, allow_zero: bool) -> Result<()> {
        let lower_ok = if allow_zero { t >= 0.0 } else { t > 0.0 };
        if !(lower_ok && t <= self.spec.t_k) {
            return Err(Error::domain(op, format!("t = {t} outside the fitted range (0, {}]", self.spec.t_k)));
        }
        Ok(())
    }

    /// `ψ_ε(λ, t)` for `t ∈ [0, t_K]`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.check("model_eval", t, true)?;
        Ok(self.monomials.eval(t))
    }

    /// `∫₀^{t̂} ψ_ε(λ, τ) dτ`.
    pub fn integral(&self, that: f64) -> Result<f64> {
        self.check("model_integral", that, false)?;
        Ok(self.monomials.antiderivative(that))
    }

    /// `∫₀^{t̂} r(τ) ψ_ε(λ, τ) dτ` for a polynomial `r`.
    pub fn integral_weighted(&self, r: &PowerSum, that: f64) -> Result<f64> {
        self.check("model_integral_weighted", that, false)?;
        if !r.is_polynomial() {
            return Err(Error::invalid("weight", "only polynomial weights are supported"));
        }
        Ok(r.mul(&self.monomials).antiderivative(that))
    }
}

pub fn model_eval(m: &FitModel, t: f64) -> Result<f64> {
    m.eval(t)
}

pub fn model_integral(m: &FitModel, that: f64) -> Result<f64> {
    m.integral(that)
}

pub fn model_integral_weighted(m: &FitModel, r0: &PowerSum, that: f64) -> Result<f64> {
    m.integral_weighted(r0, that)
}

/// Precomputed `QᵀQ`, `E` and `Qᵀp` for one observation, reused across a
/// sweep over `λ`.
#[derive(Debug, Clone)]
pub struct Fitter {
    spec: BasisSpec,
    q: DMatrix<f64>,
    p: DVector<f64>,
    qtq: DMatrix<f64>,
    gram: DMatrix<f64>,
    qtp: DVector<f64>,
}

impl Fitter {
    pub fn new(obs: &Observation, spec: &BasisSpec) -> Result<Self> {
        let q = design_matrix(obs, spec)?;
        let p = data_vector(obs);
        let qtq = q.tr_mul(&q);
        let qtp = q.tr_mul(&p);
        Ok(Self {
            spec: spec.clone(),
            gram: gram_matrix(spec)?,
            q,
            p,
            qtq,
            qtp,
        })
    }

    pub fn design(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn normal_matrix(&self, lambda: f64) -> DMatrix<f64> {
        &self.qtq + &self.gram * lambda
    }

    pub fn normal_rhs(&self) -> &DVector<f64> {
        &self.qtp
    }

    pub fn fit(&self, lambda: f64) -> Result<FitModel> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::domain("fit", format!("regularization parameter {lambda} is not positive")));
        }
        let a = PivotedLdl::factor(&self.normal_matrix(lambda))?.solve(&self.qtp);
        let residual = (&self.q * &a - &self.p).norm();
        FitModel::assemble(self.spec.clone(), a.iter().copied().collect(), lambda, residual)
    }
}

/// One-off fit; use [`Fitter`] for sweeps.
pub fn fit(obs: &Observation, spec: &BasisSpec, lambda: f64) -> Result<FitModel> {
    Fitter::new(obs, spec)?.fit(lambda)
}
