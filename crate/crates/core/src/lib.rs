//! Numerical laboratory for the semilinear Euler-Poisson-Darboux-Tricomi (EPDT)
//! equation
//!
//! ```text
//! ∂ₜ²u − t^{2m}Δu + (μ/t)∂ₜu + (ν²/t²)u = |u|^p,   t ≥ 1,
//! u(1,x) = εu₀(x),  ∂ₜu(1,x) = εu₁(x).
//! ```
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: parameters, critical exponents (Strauss, Fujita), regime checks
//!   and the linear decay-rate predictor.
//! - [`special`]: log-Gamma, Pochhammer, Gauss ₂F₁, modified Bessel `K_l` and the
//!   spherical exponential integral, on top of [`quadrature`].
//! - [`test_functions`]: hypergeometric test functions solving the adjoint
//!   equation, and the auxiliary `λ(t)`.
//! - [`ode`]: adaptive Dormand–Prince integration of the blow-up ODEs with pole
//!   extrapolation.
//! - [`pde`]: radial method-of-lines solver for the equation and its
//!   transformed forms.
//! - [`functionals`]: trajectory functionals and the integral identities they
//!   satisfy.
//! - [`harness`]: least-squares fits and lifespan sweeps.

pub mod error;
pub mod functionals;
pub mod harness;
pub mod model;
pub mod ode;
pub mod pde;
pub mod profile;
pub mod quadrature;
pub mod special;
pub mod test_functions;

pub use error::{Error, Result};
pub use model::ModelParams;
