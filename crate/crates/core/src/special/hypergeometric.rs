//! Gauss hypergeometric function `₂F₁(a, b; c; z)` on `[0, 1)`.

use serde::{Deserialize, Serialize};

use super::gamma::{gamma_signed, pochhammer, recip_gamma};
use crate::error::{Error, Result};

const MAX_TERMS: usize = 2_000_000;
/// Relative accuracy requested by [`gauss_2f1`].
pub const DEFAULT_REL_TOL: f64 = 1e-15;
/// Above this `z` the series is replaced by the `z → 1 − z` connection formula.
const TRANSFORM_ABOVE: f64 = 0.9;
/// The connection formula is singular when `c − a − b` is an integer; within
/// this distance the cancellation would cost more than four digits.
const NEAR_INTEGER: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyp2F1Params {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Hyp2F1Params {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let p = Hyp2F1Params { a, b, c };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.b.is_finite() && self.c.is_finite()) {
            return Err(Error::domain("₂F₁ parameters must be finite"));
        }
        if self.c <= 0.0 && self.c == self.c.round() {
            return Err(Error::domain(format!(
                "c = {} is a nonpositive integer",
                self.c
            )));
        }
        Ok(())
    }

    /// `c − a − b`, which governs the behaviour at `z = 1`.
    pub fn excess(&self) -> f64 {
        self.c - self.a - self.b
    }

    fn shifted(&self, k: f64) -> Self {
        Hyp2F1Params {
            a: self.a + k,
            b: self.b + k,
            c: self.c + k,
        }
    }

    /// Degree of the polynomial when `a` or `b` is a nonpositive integer.
    fn terminating_degree(&self) -> Option<u32> {
        [self.a, self.b]
            .iter()
            .filter(|v| **v <= 0.0 && **v == v.round())
            .map(|v| (-v) as u32)
            .min()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesMethod {
    DirectSeries,
    NearOneTransform,
    BoundaryFormula,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesEvalReport {
    pub value: f64,
    pub terms_used: usize,
    /// Bound on the neglected remainder, plus rounding where cancellation
    /// between the two branches of the connection formula matters.
    pub truncation_bound: f64,
    pub method: SeriesMethod,
}

pub fn gauss_2f1(params: Hyp2F1Params, z: f64) -> Result<SeriesEvalReport> {
    gauss_2f1_with_tol(params, z, DEFAULT_REL_TOL)
}

/// Evaluates `₂F₁` to relative accuracy `rel_tol`, reporting how.
///
/// Terminating series are summed exactly. Otherwise the power series is used
/// up to `z = 0.9` and, beyond that, the connection formula to `1 − z` unless
/// `c − a − b` is within `1e−4` of an integer.
pub fn gauss_2f1_with_tol(params: Hyp2F1Params, z: f64, rel_tol: f64) -> Result<SeriesEvalReport> {
    params.validate()?;
    if !(z > -1.0 && z < 1.0) {
        return Err(Error::domain(format!("₂F₁ series needs |z| < 1, got {z}")));
    }
    if params.terminating_degree().is_some() || z <= TRANSFORM_ABOVE {
        return direct_series(params, z, rel_tol);
    }
    let s = params.excess();
    if (s - s.round()).abs() < NEAR_INTEGER {
        return direct_series(params, z, rel_tol);
    }
    near_one_transform(params, z, rel_tol)
}

fn direct_series(p: Hyp2F1Params, z: f64, rel_tol: f64) -> Result<SeriesEvalReport> {
    if let Some(degree) = p.terminating_degree() {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 0..degree {
            let kf = f64::from(k);
            term *= (p.a + kf) * (p.b + kf) / ((p.c + kf) * (kf + 1.0)) * z;
            sum += term;
        }
        return Ok(SeriesEvalReport {
            value: sum,
            terms_used: degree as usize + 1,
            truncation_bound: 0.0,
            method: SeriesMethod::DirectSeries,
        });
    }

    // Past this index the term ratio is monotone in k, so the tail is
    // dominated by a geometric series.
    let settle = 2.0 * (p.a.abs() + p.b.abs() + p.c.abs()) + 10.0;
    let ratio_at = |k: f64| (p.a + k) * (p.b + k) / ((p.c + k) * (k + 1.0)) * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0usize;
    let mut bound = f64::INFINITY;
    while k < MAX_TERMS {
        term *= ratio_at(k as f64);
        sum += term;
        k += 1;
        if term == 0.0 {
            bound = 0.0;
            break;
        }
        if k as f64 > settle {
            let next = ratio_at(k as f64).abs();
            let r = next.max(z.abs());
            if r < 1.0 {
                bound = term.abs() * next / (1.0 - r);
                if bound <= rel_tol * sum.abs() {
                    break;
                }
            }
        }
    }
    if !sum.is_finite() {
        return Err(Error::NonFinite {
            t: z,
            detail: "₂F₁ series overflowed".into(),
        });
    }
    if k >= MAX_TERMS && !(bound <= rel_tol * sum.abs()) {
        return Err(Error::Truncation {
            what: "₂F₁ power series",
            terms: k,
            bound,
        });
    }
    Ok(SeriesEvalReport {
        value: sum,
        terms_used: k + 1,
        truncation_bound: bound,
        method: SeriesMethod::DirectSeries,
    })
}

/// `Γ(x)Γ(y)/(Γ(u)Γ(v))` with reciprocal Gammas allowed to vanish.
fn gamma_ratio(x: f64, y: f64, u: f64, v: f64) -> Result<f64> {
    let (sx, lx) = gamma_signed(x)?;
    let (sy, ly) = gamma_signed(y)?;
    let ru = recip_gamma(u);
    let rv = recip_gamma(v);
    Ok(sx * sy * (lx + ly).exp() * ru * rv)
}

fn near_one_transform(p: Hyp2F1Params, z: f64, rel_tol: f64) -> Result<SeriesEvalReport> {
    let s = p.excess();
    let w = 1.0 - z;
    let c1 = gamma_ratio(p.c, s, p.c - p.a, p.c - p.b)?;
    let c2 = gamma_ratio(p.c, -s, p.a, p.b)? * w.powf(s);
    let f1 = direct_series(Hyp2F1Params { a: p.a, b: p.b, c: 1.0 - s }, w, rel_tol)?;
    let f2 = direct_series(
        Hyp2F1Params {
            a: p.c - p.a,
            b: p.c - p.b,
            c: 1.0 + s,
        },
        w,
        rel_tol,
    )?;
    let t1 = c1 * f1.value;
    let t2 = c2 * f2.value;
    let value = t1 + t2;
    let rounding = 16.0 * f64::EPSILON * (t1.abs() + t2.abs());
    Ok(SeriesEvalReport {
        value,
        terms_used: f1.terms_used + f2.terms_used,
        truncation_bound: c1.abs() * f1.truncation_bound + c2.abs() * f2.truncation_bound + rounding,
        method: SeriesMethod::NearOneTransform,
    })
}

/// `F(a, b; c; 1) = Γ(c)Γ(c−a−b) / (Γ(c−a)Γ(c−b))` for `c − a − b > 0`.
pub fn gauss_2f1_at_one(params: Hyp2F1Params) -> Result<f64> {
    params.validate()?;
    let s = params.excess();
    if !(s > 0.0) {
        return Err(Error::domain(format!(
            "₂F₁ diverges at z = 1 when c − a − b = {s} ≤ 0"
        )));
    }
    gamma_ratio(params.c, s, params.c - params.a, params.c - params.b)
}

/// `d/dz F(a, b; c; z) = (ab/c) F(a+1, b+1; c+1; z)`.
pub fn gauss_2f1_derivative(params: Hyp2F1Params, z: f64) -> Result<f64> {
    gauss_2f1_nth_derivative(params, z, 1)
}

/// `dᵏ/dzᵏ F(a, b; c; z) = (a)ₖ(b)ₖ/(c)ₖ · F(a+k, b+k; c+k; z)`.
pub fn gauss_2f1_nth_derivative(params: Hyp2F1Params, z: f64, order: u32) -> Result<f64> {
    params.validate()?;
    let coef = pochhammer(params.a, order) * pochhammer(params.b, order)
        / pochhammer(params.c, order);
    if coef == 0.0 {
        return Ok(0.0);
    }
    let inner = gauss_2f1(params.shifted(f64::from(order)), z)?;
    Ok(coef * inner.value)
}
