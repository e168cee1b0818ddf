//! Compactly supported radial initial data.

use serde::{Deserialize, Serialize};

/// A radial function `f(|x|)` used as initial position or velocity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialProfile {
    Zero,
    /// `amplitude · (1 − (r/radius)²)₊^power`
    Bump {
        amplitude: f64,
        radius: f64,
        power: f64,
    },
}

impl RadialProfile {
    /// The default data shape `(1 − (r/M)²)₊⁴`.
    pub fn default_bump(support_radius: f64) -> Self {
        RadialProfile::Bump {
            amplitude: 1.0,
            radius: support_radius,
            power: 4.0,
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            RadialProfile::Zero => 0.0,
            RadialProfile::Bump {
                amplitude,
                radius,
                power,
            } => {
                let s = 1.0 - (r / radius).powi(2);
                if s > 0.0 {
                    amplitude * s.powf(power)
                } else {
                    0.0
                }
            }
        }
    }

    /// Radius of the smallest ball containing the support.
    pub fn support(&self) -> f64 {
        match *self {
            RadialProfile::Zero => 0.0,
            RadialProfile::Bump {
                amplitude, radius, ..
            } => {
                if amplitude == 0.0 {
                    0.0
                } else {
                    radius
                }
            }
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        match *self {
            RadialProfile::Zero => true,
            RadialProfile::Bump { amplitude, .. } => amplitude >= 0.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.support() == 0.0
    }

    pub fn validate(&self) -> crate::Result<()> {
        if let RadialProfile::Bump {
            amplitude,
            radius,
            power,
        } = *self
        {
            if !(amplitude.is_finite() && radius > 0.0 && radius.is_finite() && power >= 1.0) {
                return Err(crate::Error::Config(format!(
                    "bump needs finite amplitude, radius > 0 and power ≥ 1, got {self:?}"
                )));
            }
        }
        Ok(())
    }
}
