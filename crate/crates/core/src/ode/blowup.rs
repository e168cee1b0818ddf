use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dopri::{Dopri5, OdeSystem, StepOutcome};
use crate::error::{Error, Result};
use crate::harness::{fit_linear, FitResult};

/// `U'' + 2U' = cσ^{1−p}|U|^p + forcing` on `σ ≥ σ₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZhouScenario {
    pub p: f64,
    pub c: f64,
    #[serde(default = "one")]
    pub sigma0: f64,
    /// `U(σ₀)`
    pub u0: f64,
    /// `U'(σ₀)`
    pub u1: f64,
    #[serde(default)]
    pub forcing: f64,
}

fn one() -> f64 {
    1.0
}

impl ZhouScenario {
    /// Data of size `ε`: `U(σ₀) = Cε^pσ₀`, `U'(σ₀) = C'ε^p`, with the constant
    /// forcing `2C'ε^p` that keeps `U' ≥ C'ε^p` and hence `U ≥ Cε^pσ` for
    /// `C' ≥ C` along the whole trajectory.
    pub fn from_epsilon(p: f64, c: f64, big_c: f64, c_prime: f64, epsilon: f64, sigma0: f64) -> Self {
        let size = epsilon.powf(p);
        ZhouScenario {
            p,
            c,
            sigma0,
            u0: big_c * size * sigma0,
            u1: c_prime * size,
            forcing: 2.0 * c_prime * size,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 1.0 && self.c > 0.0 && self.sigma0 > 0.0) {
            return Err(Error::domain(format!(
                "zhou scenario needs p > 1, c > 0, σ₀ > 0; got {self:?}"
            )));
        }
        if !(self.u0.is_finite() && self.u1.is_finite() && self.forcing.is_finite()) {
            return Err(Error::domain("zhou initial state must be finite"));
        }
        Ok(())
    }
}

impl OdeSystem for ZhouScenario {
    fn rhs(&self, s: f64, y: &[f64], dy: &mut [f64]) {
        dy[0] = y[1];
        dy[1] = -2.0 * y[1] + self.c * s.powf(1.0 - self.p) * y[0].abs().powf(self.p) + self.forcing;
    }
}

/// `F'' = K₁(t+R)^{−q}|F|^p` from `F(T₀) = K₀(T₀+R)^a`, `F'(T₀) = aK₀(T₀+R)^{a−1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KatoScenario {
    pub p: f64,
    pub k0: f64,
    pub k1: f64,
    pub a: f64,
    pub q: f64,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "T0")]
    pub t0: f64,
}

impl KatoScenario {
    pub fn validate(&self) -> Result<()> {
        if !(self.p > 1.0 && self.k0 > 0.0 && self.k1 > 0.0 && self.r > 0.0 && self.t0 >= 0.0) {
            return Err(Error::domain(format!(
                "kato scenario needs p > 1 and positive K₀, K₁, R; got {self:?}"
            )));
        }
        if self.a < 1.0 {
            return Err(Error::domain(format!("kato scenario needs a ≥ 1, got {}", self.a)));
        }
        let mismatch = (self.p - 1.0) * self.a - (self.q - 2.0);
        if mismatch.abs() > 1e-12 * (1.0 + self.q.abs()) {
            return Err(Error::domain(format!(
                "kato scenario needs (p−1)a = q−2; (p−1)a = {}, q−2 = {}",
                (self.p - 1.0) * self.a,
                self.q - 2.0
            )));
        }
        Ok(())
    }

    pub fn initial_state(&self) -> [f64; 2] {
        let x = self.t0 + self.r;
        [self.k0 * x.powf(self.a), self.a * self.k0 * x.powf(self.a - 1.0)]
    }

    pub fn with_k0(mut self, k0: f64) -> Self {
        self.k0 = k0;
        self
    }
}

impl OdeSystem for KatoScenario {
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        dy[0] = y[1];
        dy[1] = self.k1 * (t + self.r).powf(-self.q) * y[0].abs().powf(self.p);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OdeScenario {
    Zhou(ZhouScenario),
    Kato(KatoScenario),
}

impl OdeScenario {
    pub fn validate(&self) -> Result<()> {
        match self {
            OdeScenario::Zhou(z) => z.validate(),
            OdeScenario::Kato(k) => k.validate(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BlowupOptions {
    /// `|U|` beyond which blow-up is declared.
    pub threshold: f64,
    pub rtol: f64,
    pub atol: f64,
    pub h0: f64,
    /// Blow-up is also declared when the step falls below `step_floor · t`.
    pub step_floor: f64,
}

impl Default for BlowupOptions {
    fn default() -> Self {
        BlowupOptions {
            threshold: 1e12,
            rtol: 1e-10,
            atol: 1e-30,
            h0: 1e-3,
            step_floor: 1e-14,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlowupReason {
    Threshold,
    StepCollapse,
    Horizon,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupReport {
    pub blew_up: bool,
    pub reason: BlowupReason,
    /// Time of the last accepted step.
    pub t_detect: f64,
    /// Pole location estimated from the tail; equals `t_detect` when the
    /// tail could not be fitted.
    pub t_extrapolated: f64,
    pub extrapolated: bool,
    pub threshold: f64,
    pub steps: usize,
    pub rejected_steps: usize,
    pub final_value: f64,
}

const HISTORY: usize = 512;
const TAIL_MIN_POINTS: usize = 10;

/// Pole location from the last accepted steps: near `U ∼ A(T−t)^{−α}` the
/// ratio `U/U' = (T−t)/α` is linear in `t` and vanishes at `T`. Uses the last
/// 10 steps, extended backwards until they span a decade of `|U|`.
fn extrapolate_pole(history: &VecDeque<(f64, f64, f64)>, t_detect: f64) -> Option<f64> {
    let last = history.back()?.1.abs();
    let mut ts = Vec::new();
    let mut gs = Vec::new();
    for &(t, u, du) in history.iter().rev() {
        if du == 0.0 {
            return None;
        }
        ts.push(t);
        gs.push(u / du);
        if ts.len() >= TAIL_MIN_POINTS && last >= 10.0 * u.abs() {
            let fit = fit_linear(&ts, &gs).ok()?;
            if fit.slope >= 0.0 {
                return None;
            }
            let pole = -fit.intercept / fit.slope;
            return (pole.is_finite() && pole >= t_detect).then_some(pole);
        }
    }
    None
}

/// Integrates a second-order system written as `y = (U, U')` until `|U|`
/// passes the threshold, the step collapses, or `horizon` is reached.
pub fn integrate_system<S: OdeSystem + ?Sized>(
    sys: &S,
    t0: f64,
    y0: [f64; 2],
    horizon: f64,
    opts: &BlowupOptions,
) -> BlowupReport {
    let mut stepper = Dopri5::new(2, opts.rtol, opts.atol, opts.h0);
    let mut t = t0;
    let mut y = y0;
    let mut steps = 0;
    let mut rejected = 0;
    let mut history = VecDeque::with_capacity(HISTORY);
    history.push_back((t, y[0], y[1]));
    let reason = loop {
        if y[0].abs() > opts.threshold {
            break BlowupReason::Threshold;
        }
        if t >= horizon {
            break BlowupReason::Horizon;
        }
        let h_min = opts.step_floor * t.abs().max(1.0);
        let remaining = horizon - t;
        match stepper.advance(sys, &mut t, &mut y, remaining, h_min) {
            StepOutcome::Accepted { rejected: r, .. } => {
                steps += 1;
                rejected += r;
                if history.len() == HISTORY {
                    history.pop_front();
                }
                history.push_back((t, y[0], y[1]));
            }
            StepOutcome::StepCollapse { rejected: r, .. } => {
                rejected += r;
                // Collapse with the remaining interval nearly used up is just
                // the horizon.
                if horizon - t < h_min {
                    break BlowupReason::Horizon;
                }
                break BlowupReason::StepCollapse;
            }
        }
    };
    let blew_up = reason != BlowupReason::Horizon;
    let pole = if blew_up {
        extrapolate_pole(&history, t)
    } else {
        None
    };
    BlowupReport {
        blew_up,
        reason,
        t_detect: t,
        t_extrapolated: pole.unwrap_or(t),
        extrapolated: pole.is_some(),
        threshold: opts.threshold,
        steps,
        rejected_steps: rejected,
        final_value: y[0],
    }
}

pub fn integrate(scenario: &OdeScenario, horizon: f64, opts: &BlowupOptions) -> Result<BlowupReport> {
    scenario.validate()?;
    Ok(match scenario {
        OdeScenario::Zhou(z) => integrate_system(z, z.sigma0, [z.u0, z.u1], horizon, opts),
        OdeScenario::Kato(k) => integrate_system(k, k.t0, k.initial_state(), horizon, opts),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZhouScalingResult {
    /// Least-squares line of `log T` against `log ε` over the runs that blew up.
    pub fit: FitResult,
    pub runs: Vec<(f64, BlowupReport)>,
    /// Blow-up times strictly decrease with increasing `ε`.
    pub monotone: bool,
    pub warnings: Vec<String>,
}

/// Lifespan of the `ε`-scaled equality ODE over a grid of `ε`, fitted on a
/// log–log scale; the expected slope is `−p(p−1)`.
pub fn zhou_lifespan_scaling(
    p: f64,
    c: f64,
    big_c: f64,
    c_prime: f64,
    eps_grid: &[f64],
    opts: &BlowupOptions,
) -> Result<ZhouScalingResult> {
    if eps_grid.len() < 3 || eps_grid.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::domain("ε grid needs at least three positive values"));
    }
    let lo = eps_grid.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = eps_grid.iter().cloned().fold(0.0, f64::max);
    if (hi / lo).log10() < 1.5 {
        return Err(Error::domain(format!(
            "ε grid spans {:.2} decades; at least 1.5 are needed",
            (hi / lo).log10()
        )));
    }
    let runs: Vec<(f64, BlowupReport)> = eps_grid
        .par_iter()
        .map(|&eps| {
            let sc = ZhouScenario::from_epsilon(p, c, big_c, c_prime, eps, 1.0);
            let horizon = 1.0 + 1e4 * eps.powf(-p * (p - 1.0)).max(1.0);
            let report = integrate_system(&sc, sc.sigma0, [sc.u0, sc.u1], horizon, opts);
            (eps, report)
        })
        .collect();
    let mut warnings = Vec::new();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (eps, r) in &runs {
        if r.blew_up {
            xs.push(eps.ln());
            ys.push(r.t_extrapolated.ln());
        } else {
            warnings.push(format!("ε = {eps:e}: no blow-up before σ = {}; excluded", r.t_detect));
        }
    }
    let mut sorted: Vec<&(f64, BlowupReport)> = runs.iter().filter(|(_, r)| r.blew_up).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let monotone = sorted
        .windows(2)
        .all(|w| w[1].1.t_extrapolated < w[0].1.t_extrapolated);
    let fit = fit_linear(&xs, &ys)?;
    Ok(ZhouScalingResult {
        fit,
        runs,
        monotone,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KatoOnset {
    /// Largest tested `K₀` without blow-up before the horizon.
    pub lower: f64,
    /// Smallest tested `K₀` with blow-up before the horizon.
    pub upper: f64,
    /// Geometric scan `(K₀, blew_up, t_detect)` across the initial bracket.
    pub scan: Vec<(f64, bool, f64)>,
    /// The scan switches from no blow-up to blow-up exactly once and blow-up
    /// times decrease with `K₀`.
    pub monotone: bool,
    pub bisection_steps: usize,
}

/// Locates the `K₀` above which the equality ODE blows up before `horizon`,
/// by a monotonicity scan and bisection in `log K₀` until the bracket agrees
/// to `digits` significant digits.
pub fn kato_onset_bracket(
    base: &KatoScenario,
    k0_lo: f64,
    k0_hi: f64,
    horizon: f64,
    digits: u32,
    opts: &BlowupOptions,
) -> Result<KatoOnset> {
    base.validate()?;
    if !(k0_lo > 0.0 && k0_hi > k0_lo) {
        return Err(Error::domain("need 0 < K₀ low < K₀ high"));
    }
    let run = |k0: f64| {
        let sc = base.with_k0(k0);
        integrate_system(&sc, sc.t0, sc.initial_state(), horizon, opts)
    };
    const SCAN: usize = 16;
    let ratio = (k0_hi / k0_lo).powf(1.0 / (SCAN - 1) as f64);
    let scan: Vec<(f64, bool, f64)> = (0..SCAN)
        .into_par_iter()
        .map(|i| {
            let k0 = k0_lo * ratio.powi(i as i32);
            let r = run(k0);
            (k0, r.blew_up, r.t_detect)
        })
        .collect();
    if scan[0].1 || !scan[SCAN - 1].1 {
        return Err(Error::domain(format!(
            "[{k0_lo}, {k0_hi}] does not bracket the onset before t = {horizon}"
        )));
    }
    let switches = scan.windows(2).filter(|w| w[0].1 != w[1].1).count();
    let times_decrease = scan
        .windows(2)
        .filter(|w| w[0].1 && w[1].1)
        .all(|w| w[1].2 < w[0].2);
    let monotone = switches == 1 && times_decrease;

    let first = scan.iter().position(|s| s.1).unwrap_or(SCAN - 1);
    let mut lo = scan[first - 1].0;
    let mut hi = scan[first].0;
    let tol = 0.5 * 10f64.powi(1 - digits as i32);
    let mut bisection_steps = 0;
    while (hi - lo) / hi > tol {
        let mid = (lo * hi).sqrt();
        if run(mid).blew_up {
            hi = mid;
        } else {
            lo = mid;
        }
        bisection_steps += 1;
        if bisection_steps > 200 {
            return Err(Error::Refinement("Kato onset bisection did not converge".into()));
        }
    }
    Ok(KatoOnset {
        lower: lo,
        upper: hi,
        scan,
        monotone,
        bisection_steps,
    })
}
