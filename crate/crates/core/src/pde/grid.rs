use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::special::sphere_area;

/// Uniform radial grid `r_j = j·dr`, `j = 0..n_points`, on `[0, r_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub r_max: f64,
    pub n_points: usize,
}

impl RadialGrid {
    pub fn new(r_max: f64, n_points: usize) -> Result<Self> {
        let g = RadialGrid { r_max, n_points };
        g.validate()?;
        Ok(g)
    }

    /// Smallest grid reaching `margin` past the support bound at `t_end`.
    pub fn for_horizon(params: &ModelParams, t_end: f64, n_points: usize, margin: f64) -> Result<Self> {
        let bound = params.speed().support_bound(t_end, params.support_radius);
        RadialGrid::new(bound + margin, n_points)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_max > 0.0 && self.r_max.is_finite()) {
            return Err(Error::Config(format!("grid r_max must be > 0, got {}", self.r_max)));
        }
        if self.n_points < 5 {
            return Err(Error::Config(format!(
                "grid needs at least 5 points, got {}",
                self.n_points
            )));
        }
        Ok(())
    }

    pub fn dr(&self) -> f64 {
        self.r_max / (self.n_points - 1) as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 * self.dr()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.node(j)).collect()
    }

    /// The grid with every cell halved; node `j` here is node `2j` there.
    pub fn refined(&self) -> Self {
        RadialGrid {
            r_max: self.r_max,
            n_points: 2 * self.n_points - 1,
        }
    }

    /// Errors unless the support of a solution with data in `r ≤ M` stays at
    /// least `margin` away from the outer boundary up to `t_end`.
    pub fn check_containment(&self, params: &ModelParams, t_end: f64) -> Result<()> {
        let bound = params.speed().support_bound(t_end, params.support_radius);
        let needed = bound + 2.0 * self.dr();
        if self.r_max < needed {
            return Err(Error::Config(format!(
                "grid r_max = {} does not contain the support bound φ(t)−φ(1)+M = {bound} at t = {t_end}",
                self.r_max
            )));
        }
        Ok(())
    }

    /// `∫_{|x| ≤ r_J} f dx` for radial samples `f_j`, by composite Simpson in
    /// `r` with the surface weight `|S^{n−1}| r^{n−1}`, over nodes `0..=last`.
    pub fn integrate(&self, n: u32, values: &[f64], last: usize) -> f64 {
        let dr = self.dr();
        let area = sphere_area(n);
        let w = |j: usize| values[j] * self.node(j).powi(n as i32 - 1);
        if last == 0 {
            return 0.0;
        }
        let mut sum = 0.0;
        let even = last - last % 2;
        for k in (0..even).step_by(2) {
            sum += dr / 3.0 * (w(k) + 4.0 * w(k + 1) + w(k + 2));
        }
        if last % 2 == 1 {
            // Odd panel count: close with the three-point rule on the last cell.
            let j = last;
            sum += if j >= 2 {
                dr * (-w(j - 2) + 8.0 * w(j - 1) + 5.0 * w(j)) / 12.0
            } else {
                0.5 * dr * (w(0) + w(1))
            };
        }
        area * sum
    }
}

/// Values on the grid at one time. `v` is the derivative with respect to the
/// time variable of the form that produced the state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialState {
    pub t: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl RadialState {
    pub fn zeros(t: f64, n_points: usize) -> Self {
        RadialState {
            t,
            u: vec![0.0; n_points],
            v: vec![0.0; n_points],
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.u.iter().fold(0.0f64, |a, x| a.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.u.iter().chain(&self.v).all(|x| x.is_finite())
    }
}

/// Largest node radius where `|u| > tolerance`, or 0 if there is none.
pub fn support_radius(grid: &RadialGrid, state: &RadialState, tolerance: f64) -> f64 {
    state
        .u
        .iter()
        .rposition(|x| x.abs() > tolerance)
        .map_or(0.0, |j| grid.node(j))
}
