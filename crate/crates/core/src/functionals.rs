//! Functionals of a trajectory and the integral identities they satisfy.
//!
//! With `Φ_β` the hypergeometric adjoint solution and `w = t^{μ/2}u`:
//!
//! ```text
//! H(t) = ∫|u|^p Φ_β dx        I(t) = ∫₁^t (t−s) s H(s) ds
//! J(t) = ∫₁^t (1+s)^{−3} I(s) ds
//! F(t) = ∫ w dx               G(t) = λ(t) ∫ w(t,x) φ(x) dx,  φ(x) = ∫_{S^{n−1}} e^{x·ω} dω
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{admissible_beta_interval, beta_q, ModelParams};
use crate::pde::{RadialGrid, RadialState, RadialTrajectory};
use crate::quadrature::cumulative_integral;
use crate::special::sphere_exp_integral;
use crate::test_functions::{
    initial_functionals, lambda_t_scaled, phi_beta, psi_bar_beta, ResidualReport, TestFunctionSpec,
};

/// Fewest snapshots the time integrals are computed from.
pub const MIN_SNAPSHOTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionalSeries {
    pub times: Vec<f64>,
    #[serde(rename = "H")]
    pub h: Vec<f64>,
    #[serde(rename = "I")]
    pub i: Vec<f64>,
    #[serde(rename = "J")]
    pub j: Vec<f64>,
    #[serde(rename = "F")]
    pub f: Vec<f64>,
    #[serde(rename = "G")]
    pub g: Vec<f64>,
    /// Error estimates of the time integrals `I` and `J`.
    pub i_error: Vec<f64>,
    pub j_error: Vec<f64>,
}

fn uniform_step(times: &[f64]) -> Result<f64> {
    if times.len() < MIN_SNAPSHOTS {
        return Err(Error::Refinement(format!(
            "{} snapshots are too few for the time integrals; request at least {MIN_SNAPSHOTS} \
             uniformly spaced output times (200 recommended) before blow-up",
            times.len()
        )));
    }
    if (times[0] - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!(
            "time integrals start at t = 1, but the first snapshot is at t = {}; include t = 1 in the output times",
            times[0]
        )));
    }
    let h = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    for (k, t) in times.iter().enumerate() {
        if (t - (times[0] + k as f64 * h)).abs() > 1e-9 * t.abs().max(1.0) {
            return Err(Error::domain(
                "functional series need uniformly spaced snapshot times",
            ));
        }
    }
    Ok(h)
}

/// `∫₁^t (t−s) w(s) g(s) ds` at every sample, with an error estimate, from
/// the running integrals of `g` and `s·g`.
fn convolution_with_ramp(times: &[f64], g: &[f64], h: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let a = cumulative_integral(g, h)?;
    let sg: Vec<f64> = times.iter().zip(g).map(|(s, v)| s * v).collect();
    let b = cumulative_integral(&sg, h)?;
    let values = times
        .iter()
        .enumerate()
        .map(|(k, t)| t * a.values[k] - b.values[k])
        .collect();
    let errors = times
        .iter()
        .enumerate()
        .map(|(k, t)| t.abs() * a.error[k] + b.error[k])
        .collect();
    Ok((values, errors))
}

impl FunctionalSeries {
    /// Builds `I` and `J` from samples of `H` on uniformly spaced times;
    /// `F` and `G` are left at zero.
    pub fn from_h(times: Vec<f64>, h_values: Vec<f64>) -> Result<Self> {
        if times.len() != h_values.len() {
            return Err(Error::domain("times and H differ in length"));
        }
        let step = uniform_step(&times)?;
        let sh: Vec<f64> = times.iter().zip(&h_values).map(|(s, v)| s * v).collect();
        let (i, i_error) = convolution_with_ramp(&times, &sh, step)?;
        let weight: Vec<f64> = times.iter().map(|s| (1.0 + s).powi(-3)).collect();
        let wi: Vec<f64> = i.iter().zip(&weight).map(|(a, b)| a * b).collect();
        let jc = cumulative_integral(&wi, step)?;
        let wie: Vec<f64> = i_error.iter().zip(&weight).map(|(a, b)| a * b).collect();
        let jp = cumulative_integral(&wie, step)?;
        let j_error = jc.error.iter().zip(&jp.values).map(|(a, b)| a + b.abs()).collect();
        let n = times.len();
        Ok(FunctionalSeries {
            times,
            h: h_values,
            i,
            j: jc.values,
            f: vec![0.0; n],
            g: vec![0.0; n],
            i_error,
            j_error,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Last node inside both the light cone `r < φ(t)` and the numerical support
/// `r ≤ φ(t) − φ(1) + M + 8dr`; beyond it `u` is zero up to dispersion noise.
fn last_node(grid: &RadialGrid, params: &ModelParams, t: f64) -> usize {
    let speed = params.speed();
    let cone = speed.phi(t);
    let support = speed.support_bound(t, params.support_radius) + 8.0 * grid.dr();
    let limit = support.min(cone * (1.0 - 1e-12));
    ((limit / grid.dr()).floor() as usize).min(grid.n_points - 1)
}

fn same_model(a: &ModelParams, b: &ModelParams) -> Result<()> {
    if a.m != b.m || a.n != b.n || a.mu != b.mu || a.nu != b.nu || a.p != b.p {
        return Err(Error::domain(
            "test-function parameters differ from the trajectory's",
        ));
    }
    Ok(())
}

/// `∫ f(r) g(t, r) dx` over the nodes up to [`last_node`].
fn weighted_integral(
    grid: &RadialGrid,
    params: &ModelParams,
    t: f64,
    values: impl Fn(usize) -> f64,
    weight: impl Fn(f64) -> Result<f64>,
) -> Result<f64> {
    let last = last_node(grid, params, t);
    let mut samples = vec![0.0; last + 1];
    for (j, s) in samples.iter_mut().enumerate() {
        let v = values(j);
        *s = if v == 0.0 { 0.0 } else { v * weight(grid.node(j))? };
    }
    Ok(grid.integrate(params.n, &samples, last))
}

/// `Φ_β` at `(t, r)`.
fn phi(spec: &TestFunctionSpec, t: f64) -> impl Fn(f64) -> Result<f64> + '_ {
    move |r| phi_beta(spec, t, r)
}

/// `H(t) = ∫|u|^p Φ_β dx` for one physical snapshot.
pub fn h_functional(grid: &RadialGrid, spec: &TestFunctionSpec, state: &RadialState) -> Result<f64> {
    let p = spec.params.p;
    weighted_integral(grid, &spec.params, state.t, |j| state.u[j].abs().powf(p), phi(spec, state.t))
}

/// `(F, G)` for one physical snapshot, with `w = t^{μ/2}u`.
pub fn f_and_g(grid: &RadialGrid, params: &ModelParams, state: &RadialState) -> Result<(f64, f64)> {
    let t = state.t;
    let scale = t.powf(params.mu / 2.0);
    let w = |j: usize| scale * state.u[j];
    let f = weighted_integral(grid, params, t, w, |_| Ok(1.0))?;
    let decay = lambda_t_scaled(params.m, t)?;
    let phi_t = params.speed().phi(t);
    let n = params.n;
    // λ(t)φ(x) = λ(t)e^{φ(t)} · e^{−φ(t)}φ(x), kept apart to postpone overflow.
    let g = weighted_integral(grid, params, t, w, |r| {
        Ok(decay * (-phi_t).exp() * sphere_exp_integral(r, n)?)
    })?;
    if !g.is_finite() {
        return Err(Error::NonFinite {
            t,
            detail: "G overflowed; the light cone is too wide for double precision".into(),
        });
    }
    Ok((f, g))
}

/// All functionals on the snapshots of a trajectory (physical variables).
pub fn compute_series(trajectory: &RadialTrajectory, spec: &TestFunctionSpec) -> Result<FunctionalSeries> {
    let setup = trajectory.setup();
    same_model(&spec.params, &setup.params)?;
    let states = trajectory.physical()?;
    let times: Vec<f64> = states.iter().map(|s| s.t).collect();
    uniform_step(&times)?;
    let grid = trajectory.grid();
    let nonlinear = trajectory.form().is_nonlinear();
    let mut hs = Vec::with_capacity(states.len());
    let mut fs = Vec::with_capacity(states.len());
    let mut gs = Vec::with_capacity(states.len());
    for s in &states {
        hs.push(if nonlinear { h_functional(grid, spec, s)? } else { 0.0 });
        let (f, g) = f_and_g(grid, &setup.params, s)?;
        fs.push(f);
        gs.push(g);
    }
    let mut series = FunctionalSeries::from_h(times, hs)?;
    series.f = fs;
    series.g = gs;
    Ok(series)
}

/// Both sides of the integral identity
///
/// ```text
/// εE₀ + εE₁(t−1) + ∫₁^t (t−s)H(s) ds = ∫uΦ_β dx + ∫₁^t s^{−β} ∫u ψ̄_β dx ds
/// ```
///
/// at every snapshot.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentitySeries {
    pub times: Vec<f64>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    /// Error estimates of the time integrals on each side.
    pub lhs_error: Vec<f64>,
    pub rhs_error: Vec<f64>,
}

impl IdentitySeries {
    /// Worst relative discrepancy `|lhs − rhs| / max(|lhs|, |rhs|)`.
    pub fn report(&self) -> ResidualReport {
        let mut worst = ResidualReport {
            max_abs_residual: 0.0,
            scale: 0.0,
            sample_points: 0,
        };
        for (l, r) in self.lhs.iter().zip(&self.rhs) {
            let here = ResidualReport {
                max_abs_residual: (l - r).abs(),
                scale: l.abs().max(r.abs()),
                sample_points: 1,
            };
            worst = worst.merge(here);
        }
        worst
    }
}

pub fn identity_e1_series(trajectory: &RadialTrajectory, spec: &TestFunctionSpec) -> Result<IdentitySeries> {
    let setup = trajectory.setup();
    let params = &setup.params;
    same_model(&spec.params, params)?;
    let interval = admissible_beta_interval(params)?;
    if !interval.contains(spec.beta) {
        return Err(Error::domain(format!(
            "β = {} lies outside the admissible interval {:?}",
            spec.beta, interval
        )));
    }
    let states = trajectory.physical()?;
    let times: Vec<f64> = states.iter().map(|s| s.t).collect();
    let step = uniform_step(&times)?;
    let grid = trajectory.grid();
    let eps = params.epsilon;
    let (e0, e1) = initial_functionals(spec, &setup.u0, &setup.u1)?;
    let nonlinear = trajectory.form().is_nonlinear();

    let mut h = Vec::with_capacity(states.len());
    let mut pairing = Vec::with_capacity(states.len());
    let mut bar = Vec::with_capacity(states.len());
    for s in &states {
        let t = s.t;
        h.push(if nonlinear { h_functional(grid, spec, s)? } else { 0.0 });
        pairing.push(weighted_integral(grid, params, t, |j| s.u[j], phi(spec, t))?);
        let b = weighted_integral(grid, params, t, |j| s.u[j], |r| psi_bar_beta(spec, spec.z_of(t, r)))?;
        bar.push(t.powf(-spec.beta) * b);
    }
    let (conv, conv_err) = convolution_with_ramp(&times, &h, step)?;
    let tail = cumulative_integral(&bar, step)?;
    let lhs = times
        .iter()
        .zip(&conv)
        .map(|(t, c)| eps * e0 + eps * e1 * (t - 1.0) + c)
        .collect();
    let rhs = pairing.iter().zip(&tail.values).map(|(a, b)| a + b).collect();
    Ok(IdentitySeries {
        times,
        lhs,
        rhs,
        lhs_error: conv_err,
        rhs_error: tail.error,
    })
}

/// Worst relative discrepancy of the identity over the snapshots.
#[allow(non_snake_case)]
pub fn check_identity_E1(trajectory: &RadialTrajectory, spec: &TestFunctionSpec) -> Result<ResidualReport> {
    Ok(identity_e1_series(trajectory, spec)?.report())
}

/// `t²J(t) ≤ ½∫₁^t (t−s)² H(s) ds` at every sample, allowing the quadrature
/// error estimates of both sides.
pub fn check_lemma41(series: &FunctionalSeries) -> Result<Vec<bool>> {
    let times = &series.times;
    let step = uniform_step(times)?;
    // ½∫(t−s)²H = ½[t²∫H − 2t∫sH + ∫s²H]
    let moment = |k: i32| -> Result<_> {
        let y: Vec<f64> = times.iter().zip(&series.h).map(|(s, v)| s.powi(k) * v).collect();
        cumulative_integral(&y, step)
    };
    let (m0, m1, m2) = (moment(0)?, moment(1)?, moment(2)?);
    Ok(times
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let rhs = 0.5 * (t * t * m0.values[k] - 2.0 * t * m1.values[k] + m2.values[k]);
            let rhs_err = 0.5 * (t * t * m0.error[k] + 2.0 * t * m1.error[k] + m2.error[k]);
            let lhs = t * t * series.j[k];
            let lhs_err = t * t * series.j_error[k];
            let slack = rhs_err + lhs_err + 1e-12 * (lhs.abs() + rhs.abs());
            lhs <= rhs + slack
        })
        .collect())
}

/// Result of the lower-band check `G(t)·t^m ≥ C > 0` on `[T₀, t_end]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GBand {
    pub t0: f64,
    pub min: f64,
    pub max: f64,
    pub samples: usize,
    /// True when every sample is positive and finite.
    pub holds: bool,
    /// Set when the data vanish, so the check says nothing.
    pub vacuous: bool,
}

/// Evaluates `G(t)t^m` on the snapshots with `t ≥ t0` of a `δ = 1` run.
pub fn g_lower_bound_check(trajectory: &RadialTrajectory, t0: f64) -> Result<GBand> {
    let params = &trajectory.setup().params;
    let delta = params.delta();
    if (delta - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!("the G band needs δ = 1, got δ = {delta}")));
    }
    let states = trajectory.physical()?;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut samples = 0;
    for s in states.iter().filter(|s| s.t >= t0) {
        let (_, g) = f_and_g(trajectory.grid(), params, s)?;
        let scaled = g * s.t.powf(params.m);
        min = min.min(scaled);
        max = max.max(scaled);
        samples += 1;
    }
    let vacuous = params.epsilon == 0.0 || (trajectory.setup().u0.is_zero() && trajectory.setup().u1.is_zero());
    Ok(GBand {
        t0,
        min,
        max,
        samples,
        holds: !vacuous && samples > 0 && min > 0.0 && max.is_finite(),
        vacuous,
    })
}

/// The exponent bookkeeping used with `β_q` near the cone:
/// `((m+1)(n−2) − μ + 1 − 2β_q)/(2(m+1)) · p′` against `−p′/q′`.
/// Returns `(left, right)`.
pub fn beta_q_exponent_identity(q: f64, params: &ModelParams) -> Result<(f64, f64)> {
    if !(q > 1.0 && params.p > 1.0) {
        return Err(Error::domain("need q > 1 and p > 1"));
    }
    let k = params.m + 1.0;
    let bq = beta_q(q, params);
    let p_conj = params.p / (params.p - 1.0);
    let q_conj = q / (q - 1.0);
    let left = (k * (params.dim() - 2.0) - params.mu + 1.0 - 2.0 * bq) / (2.0 * k) * p_conj;
    Ok((left, -p_conj / q_conj))
}

/// Range of the ratio of `∫₁^t (t−s)H_{β_p}(s) ds` to the right-hand side of
/// the Hölder bound with constant 1,
/// `t^{1−β_p+(m+1)n/p′}‖u(t)‖_p + ∫₁^t s^{(m+1)n/p′−β_p}(log s)^{1/p′}‖u(s)‖_p ds`.
/// A bounded ratio is what the bound asserts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Envelope {
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub samples: usize,
}

pub fn holder_envelope(trajectory: &RadialTrajectory) -> Result<Envelope> {
    let setup = trajectory.setup();
    let params = &setup.params;
    let p = params.p;
    let bp = beta_q(p, params);
    let spec = TestFunctionSpec::new(bp, *params)?;
    let states = trajectory.physical()?;
    let times: Vec<f64> = states.iter().map(|s| s.t).collect();
    let step = uniform_step(&times)?;
    let grid = trajectory.grid();
    let p_conj = p / (p - 1.0);
    let power = (params.m + 1.0) * params.dim() / p_conj;
    let mut h = Vec::with_capacity(states.len());
    let mut norms = Vec::with_capacity(states.len());
    for s in &states {
        h.push(h_functional(grid, &spec, s)?);
        let last = grid.n_points - 1;
        let abs_p: Vec<f64> = s.u.iter().map(|x| x.abs().powf(p)).collect();
        norms.push(grid.integrate(params.n, &abs_p, last).max(0.0).powf(1.0 / p));
    }
    let (conv, _) = convolution_with_ramp(&times, &h, step)?;
    let integrand: Vec<f64> = times
        .iter()
        .zip(&norms)
        .map(|(s, nrm)| s.powf(power - bp) * s.ln().powf(1.0 / p_conj) * nrm)
        .collect();
    let tail = cumulative_integral(&integrand, step)?;
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio = 0.0f64;
    let mut samples = 0;
    for k in 1..times.len() {
        let t = times[k];
        let bound = t.powf(1.0 - bp + power) * norms[k] + tail.values[k];
        if bound > 0.0 && conv[k] > 0.0 {
            let r = conv[k] / bound;
            min_ratio = min_ratio.min(r);
            max_ratio = max_ratio.max(r);
            samples += 1;
        }
    }
    Ok(Envelope {
        min_ratio,
        max_ratio,
        samples,
    })
}
