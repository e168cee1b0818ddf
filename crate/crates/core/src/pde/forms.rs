use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Equation actually integrated. All forms share the radial Laplacian and
/// differ in time variable, damping, mass and the weight of `|w|^p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquationForm {
    /// `u_tt − t^{2m}Δu + (μ/t)u_t + (ν²/t²)u = |u|^p`
    Original,
    /// The original equation without the nonlinearity.
    Linear,
    /// `u = t^γ w`, `γ = (√δ−μ+1)/2`:
    /// `w_tt − t^{2m}Δw + (1+√δ)w_t/t = t^{γ(p−1)}|w|^p`
    Dissipative,
    /// The dissipative form in `s = t^{m+1}/(m+1)`:
    /// `v_ss − Δv + (1+√δ/(m+1))v_s/s = t^{γ(p−1)−2m}|v|^p`
    Liouville,
    /// `u = t^{−μ/2} w` at `δ = 1`: `w_tt − t^{2m}Δw = t^{−μ(p−1)/2}|w|^p`
    Delta1,
}

impl EquationForm {
    pub const ALL: [EquationForm; 5] = [
        EquationForm::Original,
        EquationForm::Linear,
        EquationForm::Dissipative,
        EquationForm::Liouville,
        EquationForm::Delta1,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            EquationForm::Original => "original",
            EquationForm::Linear => "linear",
            EquationForm::Dissipative => "dissipative",
            EquationForm::Liouville => "liouville",
            EquationForm::Delta1 => "delta1",
        }
    }

    /// True when the form solves the nonlinear equation (possibly in other
    /// variables), so its solutions can be compared with the original one.
    pub fn is_nonlinear(&self) -> bool {
        !matches!(self, EquationForm::Linear)
    }

    pub fn coefficients(&self, params: &ModelParams) -> Result<FormCoefficients> {
        let m = params.m;
        let k = m + 1.0;
        let p = params.p;
        let base = FormCoefficients {
            m,
            speed_power: m,
            liouville: false,
            damping: params.mu,
            mass: params.nu * params.nu,
            forcing_power: Some(0.0),
            kappa: 0.0,
        };
        Ok(match self {
            EquationForm::Original => base,
            EquationForm::Linear => FormCoefficients {
                forcing_power: None,
                ..base
            },
            EquationForm::Dissipative | EquationForm::Liouville => {
                let sd = params.require_positive_delta()?.sqrt();
                let gamma = (sd - params.mu + 1.0) / 2.0;
                if *self == EquationForm::Dissipative {
                    FormCoefficients {
                        damping: 1.0 + sd,
                        mass: 0.0,
                        forcing_power: Some(gamma * (p - 1.0)),
                        kappa: gamma,
                        ..base
                    }
                } else {
                    FormCoefficients {
                        speed_power: 0.0,
                        liouville: true,
                        damping: 1.0 + sd / k,
                        mass: 0.0,
                        forcing_power: Some(gamma * (p - 1.0) - 2.0 * m),
                        kappa: gamma,
                        ..base
                    }
                }
            }
            EquationForm::Delta1 => {
                let delta = params.delta();
                if (delta - 1.0).abs() > 1e-12 {
                    return Err(Error::domain(format!(
                        "the delta1 form needs δ = 1, got δ = {delta}"
                    )));
                }
                FormCoefficients {
                    damping: 0.0,
                    mass: (1.0 - delta) / 4.0,
                    forcing_power: Some(-params.mu * (p - 1.0) / 2.0),
                    kappa: -params.mu / 2.0,
                    ..base
                }
            }
        })
    }
}

/// Native equation `w_ττ = c(τ)²Δw − (damping/τ)w_τ − (mass/τ²)w + t(τ)^e|w|^p`
/// with `c(τ) = τ^{speed_power}`, and its link `u = t^κ w` to the original
/// unknown. `t(τ) = τ` except for the Liouville time `τ = s = t^{m+1}/(m+1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormCoefficients {
    pub m: f64,
    pub speed_power: f64,
    pub liouville: bool,
    pub damping: f64,
    pub mass: f64,
    /// `e`; `None` drops the nonlinearity.
    pub forcing_power: Option<f64>,
    pub kappa: f64,
}

impl FormCoefficients {
    pub fn native_time(&self, t: f64) -> f64 {
        if self.liouville {
            t.powf(self.m + 1.0) / (self.m + 1.0)
        } else {
            t
        }
    }

    pub fn physical_time(&self, tau: f64) -> f64 {
        if self.liouville {
            ((self.m + 1.0) * tau).powf(1.0 / (self.m + 1.0))
        } else {
            tau
        }
    }

    /// Wave speed `c(τ)`.
    pub fn speed(&self, tau: f64) -> f64 {
        if self.speed_power == 0.0 {
            1.0
        } else {
            tau.powf(self.speed_power)
        }
    }

    /// Weight of `|w|^p` at native time `τ`, zero for the linear form.
    pub fn forcing(&self, tau: f64) -> f64 {
        match self.forcing_power {
            None => 0.0,
            Some(0.0) => 1.0,
            Some(e) => self.physical_time(tau).powf(e),
        }
    }

    /// `dτ/dt` at physical time `t`.
    fn time_rate(&self, t: f64) -> f64 {
        if self.liouville {
            t.powf(self.m)
        } else {
            1.0
        }
    }

    /// Native `(w, w_τ)` from `(u, u_t)` at physical time `t`.
    pub fn to_native(&self, t: f64, u: f64, ut: f64) -> (f64, f64) {
        let scale = t.powf(-self.kappa);
        let w = scale * u;
        let wt = scale * (ut - self.kappa * u / t);
        (w, wt / self.time_rate(t))
    }

    /// `(u, u_t)` from native `(w, w_τ)` at native time `τ`.
    pub fn from_native(&self, tau: f64, w: f64, wtau: f64) -> (f64, f64) {
        let t = self.physical_time(tau);
        let wt = wtau * self.time_rate(t);
        let scale = t.powf(self.kappa);
        (scale * w, scale * (wt + self.kappa * w / t))
    }
}
