//! The change of variables `1 + t = e^τ` applied to sampled trajectories.

use crate::error::{Error, Result};
use crate::test_functions::ResidualReport;

/// Finite-difference weights for derivatives `0..=order` at `z` on arbitrary
/// nodes (Fornberg's recursion). `w[k][j]` multiplies `f(x[j])` in the
/// `k`-th derivative.
pub(crate) fn fornberg_weights(z: f64, x: &[f64], order: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut c = vec![vec![0.0; n]; order + 1];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

struct Sample {
    t: f64,
    tau: f64,
    j: f64,
    dj: f64,
    d2j: f64,
    dj0: f64,
    d2j0: f64,
}

fn uniform_step(ts: &[f64]) -> Result<f64> {
    if ts.len() < 9 {
        return Err(Error::Refinement(format!(
            "need at least 9 samples to difference, got {}",
            ts.len()
        )));
    }
    let h = (ts[ts.len() - 1] - ts[0]) / (ts.len() - 1) as f64;
    if !(h > 0.0) {
        return Err(Error::domain("sample times must increase"));
    }
    for (i, t) in ts.iter().enumerate() {
        if (t - (ts[0] + i as f64 * h)).abs() > 1e-9 * h.max(t.abs()) {
            return Err(Error::domain("sample times must be uniformly spaced"));
        }
    }
    Ok(h)
}

fn differentiate(ts: &[f64], js: &[f64]) -> Result<Vec<Sample>> {
    if ts.len() != js.len() {
        return Err(Error::domain("times and values differ in length"));
    }
    let h = uniform_step(ts)?;
    if ts[0] <= -1.0 {
        return Err(Error::domain("need t > −1 for τ = ln(1 + t)"));
    }
    let taus: Vec<f64> = ts.iter().map(|t| t.ln_1p()).collect();
    let mut out = Vec::with_capacity(ts.len() - 4);
    for i in 2..ts.len() - 2 {
        let w = &js[i - 2..=i + 2];
        let dj = (w[0] - 8.0 * w[1] + 8.0 * w[3] - w[4]) / (12.0 * h);
        let d2j = (-w[0] + 16.0 * w[1] - 30.0 * w[2] + 16.0 * w[3] - w[4]) / (12.0 * h * h);
        let d2j_low = (w[1] - 2.0 * w[2] + w[3]) / (h * h);
        let scale = d2j.abs().max(dj.abs()).max(w[2].abs()).max(f64::MIN_POSITIVE);
        if (d2j - d2j_low).abs() > 1e-3 * scale {
            return Err(Error::Refinement(format!(
                "sampling step {h} too coarse near t = {}: second differences disagree by {:e}",
                ts[i],
                (d2j - d2j_low).abs()
            )));
        }
        let weights = fornberg_weights(taus[i], &taus[i - 2..=i + 2], 2);
        let dj0: f64 = weights[1].iter().zip(w).map(|(a, b)| a * b).sum();
        let d2j0: f64 = weights[2].iter().zip(w).map(|(a, b)| a * b).sum();
        out.push(Sample {
            t: ts[i],
            tau: taus[i],
            j: w[2],
            dj,
            d2j,
            dj0,
            d2j0,
        });
    }
    Ok(out)
}

/// Checks on a uniformly sampled `J(t)` that `J₀(τ) = J(e^τ − 1)` obeys
/// `J₀' = (1+t)J'` and `J₀'' + 2J₀' = (1+t)²J'' + 3(1+t)J'`, with
/// `t`-derivatives by fourth-order differences and `τ`-derivatives by
/// differencing on the induced non-uniform `τ` grid.
pub fn exp_substitution_check(ts: &[f64], js: &[f64]) -> Result<ResidualReport> {
    let samples = differentiate(ts, js)?;
    let mut worst = 0.0f64;
    let mut worst_scale = 0.0f64;
    let mut worst_norm = -1.0f64;
    for s in &samples {
        let x = 1.0 + s.t;
        let r1 = s.dj0 - x * s.dj;
        let r2 = s.d2j0 + 2.0 * s.dj0 - (x * x * s.d2j + 3.0 * x * s.dj);
        let scale = [s.dj0, x * s.dj, s.d2j0, 2.0 * s.dj0, x * x * s.d2j, 3.0 * x * s.dj]
            .iter()
            .fold(0.0f64, |a, v| a.max(v.abs()));
        let res = r1.abs().max(r2.abs());
        let norm = if scale > 0.0 { res / scale } else { res };
        if norm > worst_norm {
            worst_norm = norm;
            worst = res;
            worst_scale = scale;
        }
    }
    Ok(ResidualReport {
        max_abs_residual: worst,
        scale: worst_scale,
        sample_points: samples.len(),
    })
}

/// Range `(min, max)` of `(J₀'' + 2J₀')/(J₀^p τ^{1−p})` over the samples with
/// `J > 0`: the constant a super-solution of the Zhou inequality would need.
pub fn zhou_envelope(p: f64, ts: &[f64], js: &[f64]) -> Result<(f64, f64)> {
    let samples = differentiate(ts, js)?;
    let ratios: Vec<f64> = samples
        .iter()
        .filter(|s| s.j > 0.0 && s.tau > 0.0)
        .map(|s| (s.d2j0 + 2.0 * s.dj0) / (s.j.powf(p) * s.tau.powf(1.0 - p)))
        .collect();
    if ratios.is_empty() {
        return Err(Error::domain("no samples with J > 0 and τ > 0"));
    }
    Ok(ratios
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(*r), hi.max(*r))))
}
