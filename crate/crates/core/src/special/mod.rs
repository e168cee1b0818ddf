//! Special functions.

mod bessel;
mod gamma;
mod hypergeometric;
mod sphere;

pub use bessel::{bessel_k, bessel_k_scaled};
pub use gamma::{gamma_signed, log_gamma, pochhammer, recip_gamma};
pub use hypergeometric::{
    gauss_2f1, gauss_2f1_at_one, gauss_2f1_derivative, gauss_2f1_nth_derivative,
    gauss_2f1_with_tol, Hyp2F1Params, SeriesEvalReport, SeriesMethod,
};
pub use sphere::{sphere_area, sphere_exp_integral};
