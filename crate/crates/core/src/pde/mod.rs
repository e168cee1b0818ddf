//! Radial method-of-lines solver for the equation and its transformed forms.
//!
//! Space is discretised by second-order centred differences on a uniform
//! radial grid (even ghost at `r = 0`, homogeneous Dirichlet at `r_max`); time
//! by adaptive Dormand–Prince steps capped by a CFL condition.

mod forms;
mod grid;
mod solver;
mod transform;

use serde::{Deserialize, Serialize};

pub use forms::{EquationForm, FormCoefficients};
pub use grid::{support_radius, RadialGrid, RadialState};
pub use solver::{initial_state, rhs, run, RadialTrajectory, RunOptions, RunSetup};
pub use transform::{native_truncation_error, transform_roundtrip};

use crate::error::Result;
use crate::model::ModelParams;
use crate::profile::RadialProfile;

fn default_cfl() -> f64 {
    0.4
}

fn default_form() -> EquationForm {
    EquationForm::Original
}

/// JSON description of a single run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    #[serde(flatten)]
    pub params: ModelParams,
    pub grid: RadialGrid,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    pub t_end: f64,
    #[serde(default)]
    pub output_times: Vec<f64>,
    #[serde(default = "default_form")]
    pub form: EquationForm,
    /// Defaults to `(1−(r/M)²)₊⁴`.
    #[serde(default)]
    pub u0: Option<RadialProfile>,
    /// Defaults to `u0`.
    #[serde(default)]
    pub u1: Option<RadialProfile>,
    #[serde(default)]
    pub rtol: Option<f64>,
    #[serde(default)]
    pub threshold: Option<f64>,
}

impl SimulationConfig {
    pub fn to_setup(&self) -> Result<RunSetup> {
        let u0 = self
            .u0
            .unwrap_or_else(|| RadialProfile::default_bump(self.params.support_radius));
        let u1 = self.u1.unwrap_or(u0);
        let mut options = RunOptions {
            cfl: self.cfl,
            ..RunOptions::default()
        };
        if let Some(rtol) = self.rtol {
            options.rtol = rtol;
        }
        if let Some(threshold) = self.threshold {
            options.threshold = threshold;
        }
        let setup = RunSetup::new(self.form, self.params, self.grid, self.t_end)
            .with_data(u0, u1)
            .with_output_times(self.output_times.clone())
            .with_options(options);
        setup.validate()?;
        Ok(setup)
    }
}
