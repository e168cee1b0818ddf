pub mod exponents;
pub mod functionals;
pub mod ode;
pub mod simulate;
pub mod sweep;
pub mod verify;

use serde::Deserialize;

use epdt_core::ModelParams;

/// Model parameters where only `(m, n, μ, ν, p)` are required.
#[derive(Debug, Clone, Copy, Deserialize)]
pub struct ParamsInput {
    pub m: f64,
    pub n: u32,
    pub mu: f64,
    pub nu: f64,
    pub p: f64,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default, rename = "M")]
    pub support_radius: Option<f64>,
}

impl ParamsInput {
    pub fn params(&self) -> ModelParams {
        let mut p = ModelParams::new(self.m, self.n, self.mu, self.nu, self.p);
        if let Some(e) = self.epsilon {
            p = p.with_epsilon(e);
        }
        if let Some(r) = self.support_radius {
            p = p.with_support_radius(r);
        }
        p
    }
}
