//! Hypergeometric solutions of the adjoint equation and the auxiliary
//! function `λ(t)`.
//!
//! For `β` in the admissible interval, `Φ_β(t, x) = t^{1−β} ψ_β(z)` with
//! `ψ_β = ₂F₁(a, b; n/2; ·)` and `z = (m+1)²|x|²/t^{2(m+1)}` solves
//!
//! ```text
//! ∂ₜ²Φ − t^{2m}ΔΦ − ∂ₜ((μ/t)Φ) + (ν²/t²)Φ = 0   inside |x| < φ(t).
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::profile::RadialProfile;
use crate::quadrature::GaussLegendre;
use crate::special::{
    bessel_k, bessel_k_scaled, gauss_2f1, gauss_2f1_derivative, gauss_2f1_nth_derivative,
    sphere_area, Hyp2F1Params,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestFunctionSpec {
    pub beta: f64,
    pub params: ModelParams,
    /// Normally derived from `(β, params)`; replaceable for negative controls.
    pub hyp: Hyp2F1Params,
}

impl TestFunctionSpec {
    /// `a, b = (2β + μ − 1 ± √δ)/(4(m+1))`, `c = n/2`. Needs `δ > 0`.
    pub fn new(beta: f64, params: ModelParams) -> Result<Self> {
        let delta = params.require_positive_delta()?;
        let k = params.m + 1.0;
        let centre = (2.0 * beta + params.mu - 1.0) / (4.0 * k);
        let half_gap = delta.sqrt() / (4.0 * k);
        let hyp = Hyp2F1Params::new(centre + half_gap, centre - half_gap, params.dim() / 2.0)?;
        Ok(TestFunctionSpec { beta, params, hyp })
    }

    pub fn with_hyp(mut self, hyp: Hyp2F1Params) -> Self {
        self.hyp = hyp;
        self
    }

    /// `z = (m+1)² r² / t^{2(m+1)}`.
    pub fn z_of(&self, t: f64, r: f64) -> f64 {
        let k = self.params.m + 1.0;
        (k * r / t.powf(k)).powi(2)
    }

    /// Exponent of `(1 − √z)` governing `|ψ'_β|` near the cone.
    pub fn derivative_edge_exponent(&self) -> f64 {
        let p = &self.params;
        let k = p.m + 1.0;
        (k * (p.dim() - 2.0) - p.mu + 1.0 - 2.0 * self.beta) / (2.0 * k)
    }
}

fn check_z(z: f64) -> Result<()> {
    if (0.0..1.0).contains(&z) {
        Ok(())
    } else {
        Err(Error::domain(format!("z must lie in [0, 1), got {z}")))
    }
}

pub fn psi_beta(spec: &TestFunctionSpec, z: f64) -> Result<f64> {
    check_z(z)?;
    Ok(gauss_2f1(spec.hyp, z)?.value)
}

pub fn psi_beta_prime(spec: &TestFunctionSpec, z: f64) -> Result<f64> {
    check_z(z)?;
    gauss_2f1_derivative(spec.hyp, z)
}

pub fn psi_beta_second(spec: &TestFunctionSpec, z: f64) -> Result<f64> {
    check_z(z)?;
    gauss_2f1_nth_derivative(spec.hyp, z, 2)
}

/// `ψ̄_β(z) = (2β + μ − 2)ψ_β(z) + 4(m+1) z ψ'_β(z)`.
pub fn psi_bar_beta(spec: &TestFunctionSpec, z: f64) -> Result<f64> {
    let k = spec.params.m + 1.0;
    let psi = psi_beta(spec, z)?;
    let dpsi = psi_beta_prime(spec, z)?;
    Ok((2.0 * spec.beta + spec.params.mu - 2.0) * psi + 4.0 * k * z * dpsi)
}

fn cone_check(spec: &TestFunctionSpec, t: f64, r: f64) -> Result<f64> {
    let cone = spec.params.speed().phi(t);
    if r.abs() < cone {
        Ok(cone)
    } else {
        Err(Error::OutsideCone { t, r, cone })
    }
}

/// `Φ_β(t, r) = t^{1−β} ψ_β(z(t, r))` for `r < φ(t)`.
pub fn phi_beta(spec: &TestFunctionSpec, t: f64, r: f64) -> Result<f64> {
    cone_check(spec, t, r)?;
    Ok(t.powf(1.0 - spec.beta) * psi_beta(spec, spec.z_of(t, r))?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub max_abs_residual: f64,
    /// Largest magnitude among the individual terms of the equation.
    pub scale: f64,
    pub sample_points: usize,
}

impl ResidualReport {
    pub fn normalized(&self) -> f64 {
        if self.scale > 0.0 {
            self.max_abs_residual / self.scale
        } else {
            self.max_abs_residual
        }
    }

    /// Combines reports by taking the worst normalized residual.
    pub fn merge(self, other: ResidualReport) -> ResidualReport {
        let worst = if other.normalized() > self.normalized() {
            other
        } else {
            self
        };
        ResidualReport {
            sample_points: self.sample_points + other.sample_points,
            ..worst
        }
    }
}

const MIN_STEP: f64 = 1e-6;

/// Residual of the adjoint equation at `(t, r)`, with all derivatives taken
/// by fourth-order centred differences of [`phi_beta`].
pub fn conjugate_residual(spec: &TestFunctionSpec, t: f64, r: f64) -> Result<ResidualReport> {
    let p = &spec.params;
    if t < 1.0 {
        return Err(Error::domain(format!("t must be ≥ 1, got {t}")));
    }
    let cone = cone_check(spec, t, r)?;
    let dist = cone - r;
    let h_r = (1e-3f64).min(dist / 8.0);
    let h_t = (1e-3f64).min(dist / (8.0 * t.powf(p.m).max(1.0)));
    if h_r < MIN_STEP || h_t < MIN_STEP {
        return Err(Error::Refinement(format!(
            "point (t = {t}, r = {r}) is {dist:e} from the cone; finite differences would need h < {MIN_STEP:e}"
        )));
    }
    let f = |tt: f64, rr: f64| phi_beta(spec, tt, rr);

    let c = f(t, r)?;
    let (tm2, tm1, tp1, tp2) = (
        f(t - 2.0 * h_t, r)?,
        f(t - h_t, r)?,
        f(t + h_t, r)?,
        f(t + 2.0 * h_t, r)?,
    );
    let phi_t = (tm2 - 8.0 * tm1 + 8.0 * tp1 - tp2) / (12.0 * h_t);
    let phi_tt = (-tm2 + 16.0 * tm1 - 30.0 * c + 16.0 * tp1 - tp2) / (12.0 * h_t * h_t);

    // Φ is even in r, so negative radii are the symmetric extension.
    let (rm2, rm1, rp1, rp2) = (
        f(t, r - 2.0 * h_r)?,
        f(t, r - h_r)?,
        f(t, r + h_r)?,
        f(t, r + 2.0 * h_r)?,
    );
    let phi_r = (rm2 - 8.0 * rm1 + 8.0 * rp1 - rp2) / (12.0 * h_r);
    let phi_rr = (-rm2 + 16.0 * rm1 - 30.0 * c + 16.0 * rp1 - rp2) / (12.0 * h_r * h_r);

    let n = p.dim();
    let speed2 = t.powf(2.0 * p.m);
    let (lap_rr, lap_r) = if r.abs() < 1e-12 {
        (n * phi_rr, 0.0)
    } else {
        (phi_rr, (n - 1.0) / r * phi_r)
    };
    let terms = [
        phi_tt,
        -speed2 * lap_rr,
        -speed2 * lap_r,
        -p.mu / t * phi_t,
        p.mu / (t * t) * c,
        p.nu * p.nu / (t * t) * c,
    ];
    let residual: f64 = terms.iter().sum();
    let scale = terms.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    Ok(ResidualReport {
        max_abs_residual: residual.abs(),
        scale,
        sample_points: 1,
    })
}

/// Residual of `z(1−z)ψ'' + [c − (a+b+1)z]ψ' − abψ = 0` with series
/// derivatives; returns `(residual, scale)`.
pub fn hypergeometric_ode_residual(spec: &TestFunctionSpec, z: f64) -> Result<(f64, f64)> {
    let h = spec.hyp;
    let psi = psi_beta(spec, z)?;
    let d1 = psi_beta_prime(spec, z)?;
    let d2 = psi_beta_second(spec, z)?;
    let terms = [
        z * (1.0 - z) * d2,
        (h.c - (h.a + h.b + 1.0) * z) * d1,
        -h.a * h.b * psi,
    ];
    let scale = terms.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    Ok((terms.iter().sum(), scale))
}

fn bessel_order(m: f64) -> f64 {
    1.0 / (2.0 * (m + 1.0))
}

/// `λ(t) = (m+1)^{−1/(2(m+1))} t^{1/2} K_{1/(2(m+1))}(t^{m+1}/(m+1))`, a
/// decaying solution of `λ'' = t^{2m}λ`.
pub fn lambda_t(m: f64, t: f64) -> Result<f64> {
    if t < 1.0 {
        return Err(Error::domain(format!("t must be ≥ 1, got {t}")));
    }
    let k = m + 1.0;
    let l = bessel_order(m);
    Ok(k.powf(-l) * t.sqrt() * bessel_k(l, t.powf(k) / k)?)
}

/// `λ(t) e^{φ(t)}`, free of the exponential decay.
pub fn lambda_t_scaled(m: f64, t: f64) -> Result<f64> {
    if t < 1.0 {
        return Err(Error::domain(format!("t must be ≥ 1, got {t}")));
    }
    lambda_scaled_unchecked(m, t)
}

fn lambda_scaled_unchecked(m: f64, t: f64) -> Result<f64> {
    let k = m + 1.0;
    let l = bessel_order(m);
    Ok(k.powf(-l) * t.sqrt() * bessel_k_scaled(l, t.powf(k) / k)?)
}

/// Residual of `λ'' − t^{2m}λ = 0` at `t ≥ 1` with the five-point
/// second difference of step `h`, against the scale `|λ(t)|`.
pub fn lambda_equation_residual(m: f64, t: f64, h: f64) -> Result<ResidualReport> {
    if t < 1.0 || !(h > 0.0 && 2.0 * h < t) {
        return Err(Error::domain(format!("need t ≥ 1 and 0 < 2h < t; got t = {t}, h = {h}")));
    }
    let phi = |x: f64| x.powf(m + 1.0) / (m + 1.0);
    // Factor out e^{−φ(t)} so large t does not underflow.
    let f = |x: f64| -> Result<f64> { Ok(lambda_scaled_unchecked(m, x)? * (phi(t) - phi(x)).exp()) };
    let c = f(t)?;
    let d2 = (-f(t - 2.0 * h)? + 16.0 * f(t - h)? - 30.0 * c + 16.0 * f(t + h)? - f(t + 2.0 * h)?) / (12.0 * h * h);
    Ok(ResidualReport {
        max_abs_residual: (d2 - t.powf(2.0 * m) * c).abs(),
        scale: c.abs(),
        sample_points: 1,
    })
}

/// `(E₀, E₁)`: the data functionals `∫u₀ψ_β` and
/// `∫u₁ψ_β + ∫u₀[2(m+1)³r²ψ'_β + (μ+β−1)ψ_β]`, all at `z = (m+1)²r²`.
pub fn initial_functionals(
    spec: &TestFunctionSpec,
    u0: &RadialProfile,
    u1: &RadialProfile,
) -> Result<(f64, f64)> {
    let p = &spec.params;
    let k = p.m + 1.0;
    let support = u0.support().max(u1.support());
    if support == 0.0 {
        return Ok((0.0, 0.0));
    }
    if support > p.support_radius || p.support_radius >= 1.0 / k {
        return Err(Error::domain(format!(
            "data must be supported in r ≤ M < 1/(m+1) = {}; support {support}, M = {}",
            1.0 / k,
            p.support_radius
        )));
    }
    let gl = GaussLegendre::new(64);
    let area = sphere_area(p.n);
    let weight = |r: f64| area * r.powi(p.n as i32 - 1);
    let mut err = None;
    let mut eval = |r: f64| -> (f64, f64) {
        let z = (k * r).powi(2);
        match (psi_beta(spec, z), psi_beta_prime(spec, z)) {
            (Ok(psi), Ok(dpsi)) => {
                let w = weight(r);
                let e0 = u0.eval(r) * psi * w;
                let e1 = (u1.eval(r) * psi
                    + u0.eval(r) * (2.0 * k.powi(3) * r * r * dpsi + (p.mu + spec.beta - 1.0) * psi))
                    * w;
                (e0, e1)
            }
            (Err(e), _) | (_, Err(e)) => {
                err.get_or_insert(e);
                (0.0, 0.0)
            }
        }
    };
    let mut e0 = 0.0;
    let mut e1 = 0.0;
    let half = 0.5 * support;
    for (x, w) in gl.nodes.iter().zip(&gl.weights) {
        let (a, b) = eval(half * (x + 1.0));
        e0 += w * a;
        e1 += w * b;
    }
    if let Some(e) = err {
        return Err(e);
    }
    Ok((e0 * half, e1 * half))
}
