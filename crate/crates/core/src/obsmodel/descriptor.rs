use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fraccalc::PowerSum;

/// Mesh spacing used when checking that the leading coefficient stays positive.
pub const POSITIVITY_MESH: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FdoKind {
    /// `Σ rᵢ(t) D^{νᵢ} v`
    #[serde(rename = "I")]
    TypeI,
    /// `Σ D^{νᵢ}(rᵢ v)`
    #[serde(rename = "II")]
    TypeII,
}

/// A multi-term fractional differential operator.
///
/// `orders[i]` pairs with `coeffs[i]`; `orders[0]` is the leading order ν₀.
/// The optional negative branch (orders ν̄ⱼ with coefficients γⱼ) is carried as
/// metadata only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDescriptor", into = "RawDescriptor")]
pub struct FdoDescriptor {
    kind: FdoKind,
    orders: Vec<f64>,
    coeffs: Vec<PowerSum>,
    negative_orders: Vec<f64>,
    negative_coeffs: Vec<PowerSum>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDescriptor {
    kind: FdoKind,
    orders: Vec<f64>,
    coeffs: Vec<PowerSum>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    negative_orders: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    negative_coeffs: Vec<PowerSum>,
}

impl TryFrom<RawDescriptor> for FdoDescriptor {
    type Error = Error;

    fn try_from(r: RawDescriptor) -> Result<Self> {
        Self::new(r.kind, r.orders, r.coeffs)?.with_negative_branch(r.negative_orders, r.negative_coeffs)
    }
}

impl From<FdoDescriptor> for RawDescriptor {
    fn from(d: FdoDescriptor) -> Self {
        RawDescriptor {
            kind: d.kind,
            orders: d.orders,
            coeffs: d.coeffs,
            negative_orders: d.negative_orders,
            negative_coeffs: d.negative_coeffs,
        }
    }
}

fn check_orders(what: &'static str, orders: &[f64]) -> Result<()> {
    if let Some(nu) = orders.iter().find(|nu| !(**nu > 0.0 && **nu < 1.0)) {
        return Err(Error::invalid(what, format!("order {nu} outside (0, 1)")));
    }
    if orders.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(Error::invalid(what, "orders must be strictly decreasing"));
    }
    Ok(())
}

impl FdoDescriptor {
    pub fn new(kind: FdoKind, orders: Vec<f64>, coeffs: Vec<PowerSum>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::invalid("operator", "at least the leading order is required"));
        }
        if orders.len() != coeffs.len() {
            return Err(Error::invalid(
                "operator",
                format!("{} orders but {} coefficients", orders.len(), coeffs.len()),
            ));
        }
        check_orders("operator", &orders)?;
        if !coeffs[0].is_polynomial() {
            return Err(Error::invalid("operator", "leading coefficient must be a polynomial"));
        }
        if !(coeffs[0].at_zero() > 0.0) {
            return Err(Error::invalid("operator", "leading coefficient must be positive at t = 0"));
        }
        Ok(Self {
            kind,
            orders,
            coeffs,
            negative_orders: Vec::new(),
            negative_coeffs: Vec::new(),
        })
    }

    /// Single-term operator `r₀ D^{ν₀}`.
    pub fn single(kind: FdoKind, nu0: f64, r0: PowerSum) -> Result<Self> {
        Self::new(kind, vec![nu0], vec![r0])
    }

    pub fn with_negative_branch(mut self, orders: Vec<f64>, coeffs: Vec<PowerSum>) -> Result<Self> {
        if orders.len() != coeffs.len() {
            return Err(Error::invalid(
                "operator",
                format!("{} negative-branch orders but {} coefficients", orders.len(), coeffs.len()),
            ));
        }
        check_orders("operator negative branch", &orders)?;
        self.negative_orders = orders;
        self.negative_coeffs = coeffs;
        Ok(self)
    }

    pub fn kind(&self) -> FdoKind {
        self.kind
    }

    pub fn leading_order(&self) -> f64 {
        self.orders[0]
    }

    pub fn orders(&self) -> &[f64] {
        &self.orders
    }

    pub fn coeffs(&self) -> &[PowerSum] {
        &self.coeffs
    }

    /// The leading coefficient `r₀`.
    pub fn r0(&self) -> &PowerSum {
        &self.coeffs[0]
    }

    pub fn negative_orders(&self) -> &[f64] {
        &self.negative_orders
    }

    pub fn negative_coeffs(&self) -> &[PowerSum] {
        &self.negative_coeffs
    }

    /// Smallest value of `r₀` on `[0, t_max]` sampled every [`POSITIVITY_MESH`];
    /// fails unless it is positive.
    pub fn leading_lower_bound(&self, t_max: f64) -> Result<f64> {
        let delta = self.r0().min_on_mesh(t_max, POSITIVITY_MESH);
        if !(delta > 0.0) {
            return Err(Error::invalid(
                "operator",
                format!("leading coefficient reaches {delta} on [0, {t_max}]"),
            ));
        }
        Ok(delta)
    }
}
