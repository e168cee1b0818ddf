use statrs::function::gamma as sg;

use crate::error::{Error, Result};

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(sg::ln_gamma(x))
    } else {
        Err(Error::domain(format!("log_gamma needs x > 0, got {x}")))
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// `(sign, ln|Γ(x)|)` for any real `x` that is not a pole.
pub fn gamma_signed(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() || is_nonpositive_integer(x) {
        return Err(Error::domain(format!("Γ has a pole at {x}")));
    }
    if x > 0.0 {
        return Ok((1.0, sg::ln_gamma(x)));
    }
    // Γ(x)Γ(1−x) = π / sin(πx)
    let s = (std::f64::consts::PI * x).sin();
    let ln_abs = std::f64::consts::PI.ln() - s.abs().ln() - sg::ln_gamma(1.0 - x);
    Ok((s.signum(), ln_abs))
}

/// `1/Γ(x)`, which is entire and vanishes at the poles of `Γ`.
pub fn recip_gamma(x: f64) -> f64 {
    match gamma_signed(x) {
        Ok((sign, ln_abs)) => sign * (-ln_abs).exp(),
        Err(_) => 0.0,
    }
}

/// Rising factorial `(d)_k = d(d+1)⋯(d+k−1)`, `(d)_0 = 1`.
///
/// Beyond 30 factors the magnitude is accumulated as a sum of logarithms and
/// the sign is tracked separately.
pub fn pochhammer(d: f64, k: u32) -> f64 {
    if k <= 30 {
        return (0..k).fold(1.0, |acc, j| acc * (d + f64::from(j)));
    }
    let mut ln_abs = 0.0;
    let mut negative = false;
    for j in 0..k {
        let factor = d + f64::from(j);
        if factor == 0.0 {
            return 0.0;
        }
        negative ^= factor < 0.0;
        ln_abs += factor.abs().ln();
    }
    let mag = ln_abs.exp();
    if negative {
        -mag
    } else {
        mag
    }
}
