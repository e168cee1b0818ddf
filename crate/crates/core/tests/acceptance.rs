//! Acceptance suite: one PASS/FAIL line per criterion, with timing.
//!
//! Runs as a plain binary (`harness = false`) so the lines are always
//! printed; exits non-zero when any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use epdt_core::functionals::check_identity_E1;
use epdt_core::harness::fit_linear;
use epdt_core::model::{
    admissible_beta_interval, check_theorem2_hypotheses, delta_of, predicted_linear_decay, strauss_exponent,
    strauss_polynomial, DecayCase,
};
use epdt_core::ode::{kato_onset_bracket, zhou_lifespan_scaling, BlowupOptions, KatoScenario};
use epdt_core::pde::{
    native_truncation_error, run, support_radius, transform_roundtrip, EquationForm, RadialGrid, RunSetup,
};
use epdt_core::profile::RadialProfile;
use epdt_core::special::{gauss_2f1, gauss_2f1_at_one, Hyp2F1Params};
use epdt_core::test_functions::{
    conjugate_residual, lambda_equation_residual, lambda_t_scaled, psi_beta_prime, TestFunctionSpec,
};
use epdt_core::{ModelParams, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + stream)
}

fn c1_exponents() -> Result<Outcome> {
    let ps = strauss_exponent(3, 0.0, 0.0)?;
    let exact = 1.0 + 2f64.sqrt();
    let mut worst = 0.0f64;
    let mut rng = rng(1);
    for _ in 0..100 {
        let n = rng.gen_range(1..=6u32);
        let m = rng.gen_range(0.0..3.0);
        let mu = rng.gen_range(0.0..6.0);
        let (a, b, k) = strauss_polynomial(n, m, mu);
        if a <= 0.0 {
            continue;
        }
        let p = strauss_exponent(n, m, mu)?;
        // (m+1)(n−1+μ/(m+1)) p² − ((m+1)(n+1+μ/(m+1)) − 2m − 2 + 2) p ... written out
        // directly rather than through the returned coefficients.
        let kk = m + 1.0;
        let nf = f64::from(n);
        let direct = (kk * nf - 1.0 + mu) * p * p - (kk * (nf - 2.0) + 3.0 + mu) * p - 2.0 * kk;
        worst = worst.max(direct.abs()).max((a * p * p - b * p - k).abs());
    }
    let err = (ps - exact).abs();
    outcome(
        err <= 1e-10 && worst <= 1e-10,
        format!("|p_S(3) − (1+√2)| = {err:.1e}, worst residual over 100 cases {worst:.1e}"),
    )
}

fn c2_delta() -> Result<Outcome> {
    let d = delta_of(3.0, 0.5);
    let mut params = ModelParams::new(0.0, 3, 3.0, 0.5, 2.0);
    params.p = strauss_exponent(3, 0.0, 3.0)?;
    let report = check_theorem2_hypotheses(&params);
    outcome(
        d == 3.0 && report.admissible,
        format!("δ(3, 0.5) = {d}, (n,μ,ν) = (3,3,0.5) admissible: {}", report.admissible),
    )
}

/// The series at `z = 1` summed directly and extrapolated: partial sums
/// behave like `F − A N^{−s} − B N^{−s−1} − …` with `s = c − a − b`, so two
/// Richardson levels over `N, 2N, 4N` remove the two leading tail terms.
fn series_at_one(a: f64, b: f64, c: f64) -> f64 {
    let s = c - a - b;
    let n = 1usize << 18;
    let mut partial = Vec::new();
    let (mut sum, mut term) = (0.0, 1.0);
    for k in 0..4 * n {
        if k == n || k == 2 * n {
            partial.push(sum);
        }
        sum += term;
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (1.0 + kf));
    }
    partial.push(sum);
    let level = |x: f64, y: f64, e: f64| (2f64.powf(e) * y - x) / (2f64.powf(e) - 1.0);
    let r0 = level(partial[0], partial[1], s);
    let r1 = level(partial[1], partial[2], s);
    level(r0, r1, s + 1.0)
}

fn c3_hypergeometric() -> Result<Outcome> {
    // Terminating: F(−2, b; c; z) = 1 − 2bz/c + b(b+1)z²/(c(c+1)).
    let mut term_err = 0.0f64;
    for &(b, c, z) in &[(1.5, 2.5, 0.3), (0.7, 1.2, 0.9), (3.0, 0.5, -0.4), (2.0, 4.0, 0.99)] {
        let exact = 1.0 - 2.0 * b * z / c + b * (b + 1.0) * z * z / (c * (c + 1.0));
        let v = gauss_2f1(Hyp2F1Params::new(-2.0, b, c)?, z)?.value;
        term_err = term_err.max((v - exact).abs());
    }
    let mut log_err = 0.0f64;
    for i in 1..=9 {
        let z = f64::from(i) / 10.0;
        let exact = -(1.0 - z).ln() / z;
        let v = gauss_2f1(Hyp2F1Params::new(1.0, 1.0, 2.0)?, z)?.value;
        log_err = log_err.max((v / exact - 1.0).abs());
    }
    let mut gauss_err = 0.0f64;
    for &(a, b, c) in &[(0.3, 0.4, 1.5), (0.5, 0.25, 1.5), (1.0, 0.5, 2.0), (0.2, 0.2, 0.75), (0.5, 0.5, 1.3)] {
        let closed = gauss_2f1_at_one(Hyp2F1Params::new(a, b, c)?)?;
        let series = series_at_one(a, b, c);
        gauss_err = gauss_err.max((closed - series).abs() / closed);
    }
    outcome(
        term_err <= 1e-14 && log_err <= 1e-9 && gauss_err <= 1e-6,
        format!("terminating {term_err:.1e}, −ln(1−z)/z {log_err:.1e}, Gauss sum {gauss_err:.1e}"),
    )
}

/// Random parameters with `δ > 0` and a non-empty admissible `β` interval.
fn random_admissible(rng: &mut ChaCha8Rng) -> Result<(ModelParams, f64)> {
    loop {
        let m = rng.gen_range(0.0..1.5);
        let n = rng.gen_range(1..=4u32);
        let mu = rng.gen_range(0.0..5.0);
        let nu = rng.gen_range(0.0..1.0);
        let params = ModelParams::new(m, n, mu, nu, 2.0);
        if params.delta() <= 0.05 {
            continue;
        }
        let iv = admissible_beta_interval(&params)?;
        if let Some(beta) = iv.interpolate(rng.gen_range(0.05..0.95)) {
            return Ok((params, beta));
        }
    }
}

fn c4_conjugate() -> Result<Outcome> {
    let mut rng = rng(4);
    let mut worst = 0.0f64;
    let mut worst_ratio = f64::INFINITY;
    for _ in 0..20 {
        let (params, beta) = random_admissible(&mut rng)?;
        let spec = TestFunctionSpec::new(beta, params)?;
        let mut hyp = spec.hyp;
        hyp.a += 0.1;
        let control = spec.with_hyp(hyp);
        let mut good = Vec::with_capacity(100);
        let mut bad = Vec::with_capacity(100);
        for _ in 0..100 {
            let t = rng.gen_range(1.0..4.0);
            let r = rng.gen_range(0.0..0.9) * params.speed().phi(t);
            good.push(conjugate_residual(&spec, t, r)?.normalized());
            bad.push(conjugate_residual(&control, t, r)?.normalized());
        }
        let g = good.iter().copied().fold(0.0, f64::max);
        bad.sort_by(f64::total_cmp);
        let median_bad = bad[bad.len() / 2];
        worst = worst.max(g);
        worst_ratio = worst_ratio.min(median_bad / g.max(f64::MIN_POSITIVE));
    }
    outcome(
        worst <= 1e-5 && worst_ratio >= 1e3,
        format!("worst normalised residual {worst:.1e}, smallest control/residual ratio {worst_ratio:.1e}"),
    )
}

fn c5_edge_exponent() -> Result<Outcome> {
    // Lemma (ii) range: β above ((m+1)(n−2)−μ+1)/2, with a, b > 0. Exponents
    // below −1 keep the regular part of ψ' negligible on z ∈ [0.9, 0.999].
    let mut rng = rng(5);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < 10 {
        let m = rng.gen_range(0.0..1.5);
        let n = rng.gen_range(1..=4u32);
        let mu = rng.gen_range(0.0..4.0);
        let nu = rng.gen_range(0.0..1.0);
        let params = ModelParams::new(m, n, mu, nu, 2.0);
        if params.delta() <= 0.05 {
            continue;
        }
        let k = m + 1.0;
        let e: f64 = rng.gen_range(-2.5..-1.05);
        let beta = (k * (f64::from(n) - 2.0) - mu + 1.0 - 2.0 * k * e) / 2.0;
        let spec = TestFunctionSpec::new(beta, params)?;
        if !(spec.hyp.a > 0.0 && spec.hyp.b > 0.0) {
            continue;
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) = (0..30)
            .map(|i| {
                // 1 − √z log-spaced from 1 − √0.9 to 1 − √0.999
                let lo = (1.0 - 0.999f64.sqrt()).ln();
                let hi = (1.0 - 0.9f64.sqrt()).ln();
                let s = (lo + (hi - lo) * f64::from(i) / 29.0).exp();
                let z = (1.0 - s) * (1.0 - s);
                Ok((s.ln(), psi_beta_prime(&spec, z)?.abs().ln()))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip();
        let fit = fit_linear(&xs, &ys)?;
        let predicted = spec.derivative_edge_exponent();
        worst = worst.max((fit.slope / predicted - 1.0).abs());
        done += 1;
    }
    outcome(worst <= 0.05, format!("worst relative slope error over 10 specs {:.2}%", 100.0 * worst))
}

fn c6_lambda() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut worst_band = 0.0f64;
    for &m in &[0.0, 0.5, 1.0] {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for i in 0..=90 {
            let t = 1.0 + f64::from(i) * 0.1;
            worst = worst.max(lambda_equation_residual(m, t, 1e-3)?.normalized());
            // λ t^{m/2} e^{φ(t)}
            let v = lambda_t_scaled(m, t)? * t.powf(m / 2.0);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        worst_band = worst_band.max(hi / lo);
    }
    outcome(
        worst <= 1e-4 && worst_band <= 4.0,
        format!("worst residual/|λ| {worst:.1e}, widest band max/min {worst_band:.3}"),
    )
}

fn c7_zhou() -> Result<Outcome> {
    let opts = BlowupOptions::default();
    let mut parts = Vec::new();
    let mut pass = true;
    for &(p, grid) in &[
        (1.5, &[3e-1, 1e-1, 3e-2, 1e-2, 3e-3, 1e-3][..]),
        (2.0, &[3e-1, 1e-1, 3e-2, 1e-2, 3e-3][..]),
    ] {
        let r = zhou_lifespan_scaling(p, 1.0, 1.0, 1.0, grid, &opts)?;
        let target = -p * (p - 1.0);
        let rel = (r.fit.slope / target - 1.0).abs();
        pass &= rel <= 0.15 && r.fit.r_squared >= 0.98 && r.monotone;
        parts.push(format!(
            "p={p}: slope {:.3} vs {target}, r² {:.4}",
            r.fit.slope, r.fit.r_squared
        ));
    }
    outcome(pass, parts.join("; "))
}

fn c8_kato() -> Result<Outcome> {
    let base = KatoScenario {
        p: 2.0,
        k0: 1.0,
        k1: 1.0,
        a: 1.0,
        q: 3.0,
        r: 1.0,
        t0: 1.0,
    };
    let onset = kato_onset_bracket(&base, 1e-3, 1e2, 1e4, 2, &BlowupOptions::default())?;
    let width = (onset.upper - onset.lower) / onset.upper;
    outcome(
        onset.monotone && width <= 0.05,
        format!(
            "K₀ onset in [{:.4}, {:.4}] at horizon 1e4, monotone scan {}",
            onset.lower, onset.upper, onset.monotone
        ),
    )
}

fn l2_norm(grid: &RadialGrid, n: u32, u: &[f64]) -> f64 {
    let sq: Vec<f64> = u.iter().map(|x| x * x).collect();
    grid.integrate(n, &sq, grid.n_points - 1).sqrt()
}

fn c9_linear_decay() -> Result<Outcome> {
    let params = ModelParams::new(0.0, 1, 4.0, 0.0, 2.0);
    let pred = predicted_linear_decay(0.0, &params)?;
    let t_end = 50.0;
    let grid = RadialGrid::for_horizon(&params, t_end, 1024, 0.5)?;
    let times: Vec<f64> = (0..=45).map(|i| 5.0 + f64::from(i)).collect();
    let setup = RunSetup::new(EquationForm::Linear, params, grid, t_end).with_output_times(times);
    let tr = run(&setup)?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = tr
        .physical()?
        .iter()
        .map(|s| (s.t.ln(), l2_norm(&grid, params.n, &s.u).ln()))
        .unzip();
    let fit = fit_linear(&xs, &ys)?;
    let rel = (fit.slope / pred.time_exponent - 1.0).abs();
    outcome(
        pred.case == DecayCase::BelowThreshold && (pred.time_exponent + 0.5).abs() < 1e-12 && rel <= 0.10,
        format!(
            "fitted L² exponent {:.4} vs predicted {} ({:?}), r² {:.4}",
            fit.slope, pred.time_exponent, pred.case, fit.r_squared
        ),
    )
}

fn c10_blowup() -> Result<Outcome> {
    let base = ModelParams::new(0.0, 1, 0.0, 0.0, 2.0);
    let horizon = 12.0;
    let eps = [2.0, 1.5, 1.0, 0.7];
    let runs: Vec<(f64, bool, f64, usize, f64)> = eps
        .par_iter()
        .map(|&e| {
            let params = base.with_epsilon(e);
            let grid = RadialGrid::for_horizon(&params, horizon, 5001, 0.5)?;
            let bump = RadialProfile::Bump {
                amplitude: 1.0,
                radius: params.support_radius,
                power: 8.0,
            };
            let setup = RunSetup::new(EquationForm::Original, params, grid, horizon)
                .with_data(bump, bump)
                .with_uniform_outputs(24);
            let tr = run(&setup)?;
            let dr = grid.dr();
            let mut worst_excess = f64::NEG_INFINITY;
            for s in tr.snapshots() {
                let r = support_radius(&grid, s, 1e-8 * s.max_abs());
                let bound = params.speed().support_bound(s.t, params.support_radius);
                worst_excess = worst_excess.max((r - bound) / dr);
            }
            Ok((e, tr.report().blew_up, tr.report().t_detect, tr.snapshots().len(), worst_excess))
        })
        .collect::<Result<_>>()?;
    let all_blow = runs.iter().all(|r| r.1);
    let decreasing = runs.windows(2).all(|w| w[0].2 < w[1].2);
    let excess = runs.iter().map(|r| r.4).fold(f64::NEG_INFINITY, f64::max);
    let times: Vec<String> = runs.iter().map(|r| format!("T({})={:.3}", r.0, r.2)).collect();
    let snaps: usize = runs.iter().map(|r| r.3).sum();
    outcome(
        all_blow && decreasing && excess <= 5.0,
        format!(
            "{}; support within bound + {excess:.1} dr over {snaps} snapshots",
            times.join(", ")
        ),
    )
}

fn smooth_e1_setup(n_points: usize, outputs: usize) -> Result<RunSetup> {
    let params = ModelParams::new(0.5, 2, 2.0, 0.0, 3.0)
        .with_epsilon(0.5)
        .with_support_radius(0.4);
    let t_end = 2.5;
    let grid = RadialGrid::new(3.0, n_points)?;
    let times: Vec<f64> = (0..=outputs)
        .map(|i| 1.0 + (t_end - 1.0) * i as f64 / outputs as f64)
        .collect();
    Ok(RunSetup::new(EquationForm::Original, params, grid, t_end).with_output_times(times))
}

fn c11_identity() -> Result<Outcome> {
    let mut rel = Vec::new();
    for &(n_points, outputs) in &[(401, 100), (801, 200)] {
        let setup = smooth_e1_setup(n_points, outputs)?;
        let tr = run(&setup)?;
        let spec = TestFunctionSpec::new(0.5, setup.params)?;
        rel.push(check_identity_E1(&tr, &spec)?.normalized());
    }
    let ratio = rel[1] / rel[0];
    outcome(
        rel[0] <= 0.02 && ratio <= 0.5,
        format!(
            "relative discrepancy {:.3}% coarse, {:.3}% refined (ratio {ratio:.2})",
            100.0 * rel[0],
            100.0 * rel[1]
        ),
    )
}

fn roundtrip_case(params: ModelParams, forms: &[EquationForm]) -> Result<(bool, String)> {
    let t_end = 2.5;
    let grid = RadialGrid::for_horizon(&params, t_end, 161, 0.5)?;
    let setup = RunSetup::new(EquationForm::Original, params, grid, t_end).with_uniform_outputs(7);
    let native = native_truncation_error(&setup)?.max_abs_residual;
    let tr = run(&setup)?;
    let mut pass = native > 0.0;
    let mut parts = Vec::new();
    for &form in forms {
        let d = transform_roundtrip(&tr, form)?.max_abs_residual;
        pass &= d <= 10.0 * native;
        parts.push(format!("{} {:.1e}", form.name(), d));
    }
    Ok((pass, format!("δ={:.3}: native {native:.1e}, {}", params.delta(), parts.join(", "))))
}

fn c12_roundtrips() -> Result<Outcome> {
    // δ = (μ−1)² − 4ν² = 4 with ν ≠ 0, so the dissipative shift γ is not zero.
    let dissipative = ModelParams::new(0.5, 2, 1.0 + 5f64.sqrt(), 0.5, 2.0).with_epsilon(0.5);
    let delta1 = ModelParams::new(0.5, 2, 2.0, 0.0, 2.0).with_epsilon(0.5);
    let (a, da) = roundtrip_case(dissipative, &[EquationForm::Dissipative, EquationForm::Liouville])?;
    let (b, db) = roundtrip_case(delta1, &[EquationForm::Delta1])?;
    outcome(a && b, format!("{da}; {db}"))
}

type Criterion = (u32, &'static str, Duration, fn() -> Result<Outcome>);

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 12] = [
        (1, "exponent algebra", secs(1), c1_exponents),
        (2, "delta check", secs(1), c2_delta),
        (3, "hypergeometric layer", secs(5), c3_hypergeometric),
        (4, "test-function identity", secs(30), c4_conjugate),
        (5, "edge asymptotics of psi'", secs(30), c5_edge_exponent),
        (6, "lambda(t)", secs(10), c6_lambda),
        (7, "Zhou scaling", secs(60), c7_zhou),
        (8, "Kato onset", secs(60), c8_kato),
        (9, "linear decay", secs(120), c9_linear_decay),
        (10, "nonlinear blow-up", secs(300), c10_blowup),
        (11, "identity E1", secs(300), c11_identity),
        (12, "transform round trips", secs(300), c12_roundtrips),
    ];
    let mut failed = 0;
    for (id, name, budget, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = elapsed <= budget;
        let pass = pass && in_time;
        if !pass {
            failed += 1;
        }
        let budget_note = if in_time { String::new() } else { format!(" over budget {budget:?}") };
        println!(
            "criterion {id:>2} {} {name} [{:.2}s{budget_note}]: {detail}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    println!(
        "criterion 13 NOT REPRODUCIBLE: sharpness of the exponential lifespan bound for the full PDE at the \
         critical power, and the δ = 1 blow-up claim across all admissible (m, μ), are out of desk-scale reach; \
         covered instead by criteria 4 to 12 and the surrogate sweeps"
    );
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
