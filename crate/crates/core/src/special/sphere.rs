use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::quadrature::integrate;

/// Surface measure `|S^{n−1}| = 2π^{n/2}/Γ(n/2)` of the unit sphere in `ℝⁿ`.
pub fn sphere_area(n: u32) -> f64 {
    let half = f64::from(n) / 2.0;
    2.0 * (half * PI.ln() - ln_gamma(half)).exp()
}

/// `φ(x) = ∫_{S^{n−1}} e^{x·ω} dω`, which depends on `|x|` only.
///
/// For `n = 1` the sphere is `{±1}` and `φ = eˣ + e⁻ˣ`; otherwise the polar
/// reduction `|S^{n−2}| ∫₀^π e^{|x|cos θ} sin^{n−2}θ dθ` is integrated
/// adaptively with the factor `e^{|x|}` pulled out.
pub fn sphere_exp_integral(x_norm: f64, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("dimension must be ≥ 1"));
    }
    let x = x_norm.abs();
    if n == 1 {
        return Ok(2.0 * x.cosh());
    }
    let k = f64::from(n - 2);
    let integrand = |theta: f64| {
        let s = theta.sin();
        let w = if n == 2 { 1.0 } else { s.powf(k) };
        (x * (theta.cos() - 1.0)).exp() * w
    };
    // Split at the peak width so the adaptive rule sees the spike near θ = 0.
    let split = (PI / 2.0).min(4.0 / x.max(1e-300).sqrt()).max(1e-3);
    let head = integrate(integrand, 0.0, split, 0.0, 1e-13)?;
    let tail = integrate(integrand, split, PI, 1e-15 * head.value.abs(), 1e-13)?;
    Ok(sphere_area(n - 1) * (head.value + tail.value) * x.exp())
}
