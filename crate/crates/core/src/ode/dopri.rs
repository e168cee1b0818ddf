/// Right-hand side `y' = f(t, y)` of a first-order system.
pub trait OdeSystem {
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]);
}

impl<F: Fn(f64, &[f64], &mut [f64])> OdeSystem for F {
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        self(t, y, dy)
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
// Difference between the fifth- and fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepOutcome {
    /// One step of the given size was accepted after `rejected` retries.
    Accepted { h: f64, rejected: usize },
    /// The controller asked for a step below the floor.
    StepCollapse { h: f64, rejected: usize },
}

/// Dormand–Prince 5(4) stepper with first-same-as-last reuse and a standard
/// step-size controller (safety 0.9, growth clamped to `[0.2, 5]`).
#[derive(Debug, Clone)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    /// Proposed size of the next step.
    pub h: f64,
    k: [Vec<f64>; 7],
    tmp: Vec<f64>,
    y_new: Vec<f64>,
    fsal_valid: bool,
}

impl Dopri5 {
    pub fn new(dim: usize, rtol: f64, atol: f64, h0: f64) -> Self {
        Dopri5 {
            rtol,
            atol,
            h: h0,
            k: std::array::from_fn(|_| vec![0.0; dim]),
            tmp: vec![0.0; dim],
            y_new: vec![0.0; dim],
            fsal_valid: false,
        }
    }

    /// Forget the cached derivative, e.g. after the state was modified.
    pub fn reset(&mut self) {
        self.fsal_valid = false;
    }

    fn stage(&mut self, y: &[f64], h: f64, coefs: &[(usize, f64)]) {
        for (i, out) in self.tmp.iter_mut().enumerate() {
            let mut acc = 0.0;
            for &(j, a) in coefs {
                acc += a * self.k[j][i];
            }
            *out = y[i] + h * acc;
        }
    }

    /// Error of a trial step of size `h`; leaves the candidate in `y_new` and
    /// its derivative in `k[6]`.
    fn trial<S: OdeSystem + ?Sized>(&mut self, sys: &S, t: f64, y: &[f64], h: f64) -> f64 {
        self.stage(y, h, &[(0, A21)]);
        sys.rhs(t + C2 * h, &self.tmp, &mut self.k[1]);
        self.stage(y, h, &[(0, A31), (1, A32)]);
        sys.rhs(t + C3 * h, &self.tmp, &mut self.k[2]);
        self.stage(y, h, &[(0, A41), (1, A42), (2, A43)]);
        sys.rhs(t + C4 * h, &self.tmp, &mut self.k[3]);
        self.stage(y, h, &[(0, A51), (1, A52), (2, A53), (3, A54)]);
        sys.rhs(t + C5 * h, &self.tmp, &mut self.k[4]);
        self.stage(y, h, &[(0, A61), (1, A62), (2, A63), (3, A64), (4, A65)]);
        sys.rhs(t + h, &self.tmp, &mut self.k[5]);
        let [k1, _, k3, k4, k5, k6, k7] = &mut self.k;
        for i in 0..y.len() {
            self.y_new[i] =
                y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        sys.rhs(t + h, &self.y_new, k7);
        let mut sum = 0.0;
        for i in 0..y.len() {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = self.atol + self.rtol * y[i].abs().max(self.y_new[i].abs());
            sum += (e / sc).powi(2);
        }
        let err = (sum / y.len().max(1) as f64).sqrt();
        if err.is_finite() {
            err
        } else {
            f64::INFINITY
        }
    }

    /// Takes one accepted step from `(t, y)` of size at most `h_max`, retrying
    /// with smaller steps as the error control demands. On acceptance `t` and
    /// `y` are advanced. Steps below `h_min` are refused.
    pub fn advance<S: OdeSystem + ?Sized>(
        &mut self,
        sys: &S,
        t: &mut f64,
        y: &mut [f64],
        h_max: f64,
        h_min: f64,
    ) -> StepOutcome {
        if !self.fsal_valid {
            sys.rhs(*t, y, &mut self.k[0]);
            self.fsal_valid = true;
        }
        let mut rejected = 0;
        let mut h = self.h.min(h_max);
        loop {
            if h < h_min {
                return StepOutcome::StepCollapse { h, rejected };
            }
            let err = self.trial(sys, *t, y, h);
            if err <= 1.0 {
                y.copy_from_slice(&self.y_new);
                *t += h;
                self.k.swap(0, 6);
                let fac = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                // Keep the controller's proposal when the step was clipped.
                self.h = if h < h_max { h * fac } else { self.h.max(h * fac) };
                return StepOutcome::Accepted { h, rejected };
            }
            rejected += 1;
            let fac = if err.is_finite() {
                (0.9 * err.powf(-0.2)).clamp(0.2, 1.0)
            } else {
                0.2
            };
            h *= fac;
            self.h = h;
        }
    }
}
