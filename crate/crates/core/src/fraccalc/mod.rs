//! Fractional calculus primitives: special functions, tabulated functions,
//! discrete Caputo derivatives and Riemann-Liouville integrals.

pub mod linking;
pub mod operators;
pub mod sampled;
pub mod special;

pub use linking::{
    caputo_at_zero, extrapolate_to_zero, initial_identity_residual, ratio_limit_exact, ratio_limit_exact_type_ii,
    ratio_limit_probe, ratio_limit_probe_type_ii, IdentityCheck,
};
pub use operators::{caputo_l1, rl_integral};
pub use sampled::{PowerSum, SampledFunction};
pub use special::{beta_fn, binom_real, gamma_fn};
