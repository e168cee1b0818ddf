use crate::error::{Error, Result};
use crate::quadrature::integrate;

/// Integrand exponent below which the contribution is dropped (`e^{−46} ≈ 1e−20`).
const CUTOFF_EXPONENT: f64 = -46.0;

/// `e^{z} K_l(z) = ∫₀^∞ e^{−z(cosh y − 1)} cosh(ly) dy`.
///
/// The integral is truncated at the first `Y` past the integrand's peak where
/// `−z(cosh Y − 1) + |l|Y < −46`, then evaluated by adaptive Gauss–Kronrod.
pub fn bessel_k_scaled(l: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain(format!("K_l needs z > 0, got {z}")));
    }
    let l = l.abs();
    let exponent = |y: f64| -z * (y.cosh() - 1.0) + l * y;
    // The peak of the exponent sits at sinh(y) = l/z.
    let peak = (l / z).asinh();
    let mut upper = peak.max(0.5);
    while exponent(upper) > CUTOFF_EXPONENT {
        upper += 0.5;
    }
    let integrand = |y: f64| {
        // cosh(ly) e^{−z(cosh y −1)} = ½(e^{ly} + e^{−ly}) e^{−z(cosh y − 1)}
        let base = -z * (y.cosh() - 1.0);
        0.5 * ((base + l * y).exp() + (base - l * y).exp())
    };
    let r = integrate(integrand, 0.0, upper, 0.0, 1e-13)?;
    Ok(r.value)
}

/// Modified Bessel function of the second kind, `K_l(z) = ∫₀^∞ e^{−z cosh y} cosh(ly) dy`.
pub fn bessel_k(l: f64, z: f64) -> Result<f64> {
    Ok(bessel_k_scaled(l, z)? * (-z).exp())
}
