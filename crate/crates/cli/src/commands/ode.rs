use epdt_core::harness::{fit_linear, FitResult};
use epdt_core::ode::{integrate_system, BlowupOptions, BlowupReport, KatoScenario, ZhouScenario};
use serde::{Deserialize, Serialize};

use crate::output::{create_dir, num, write_json, Table};
use crate::{CliError, Context};

fn one() -> f64 {
    1.0
}

#[derive(Deserialize)]
struct ZhouRuns {
    p: f64,
    #[serde(default = "one")]
    c: f64,
    #[serde(default = "one", rename = "C")]
    big_c: f64,
    #[serde(default = "one", rename = "C_prime")]
    c_prime: f64,
    #[serde(default = "one")]
    sigma0: f64,
    eps_values: Vec<f64>,
}

#[derive(Deserialize)]
struct KatoRuns {
    p: f64,
    k1: f64,
    a: f64,
    q: f64,
    #[serde(rename = "R")]
    r: f64,
    #[serde(rename = "T0")]
    t0: f64,
    k0_values: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Scenarios {
    Zhou(ZhouRuns),
    Kato(KatoRuns),
}

#[derive(Deserialize)]
struct OdeConfig {
    #[serde(flatten)]
    scenarios: Scenarios,
    horizon: f64,
    #[serde(default)]
    options: BlowupOptions,
}

#[derive(Serialize)]
struct Run {
    parameter: f64,
    report: BlowupReport,
}

#[derive(Serialize)]
struct Summary {
    kind: &'static str,
    /// `log T` against `log ε` (Zhou) or `log K₀` (Kato) over runs that blew up.
    fit: Option<FitResult>,
    runs: Vec<Run>,
}

pub fn run(ctx: &Context) -> Result<(), CliError> {
    let cfg: OdeConfig = ctx.load()?;
    if !(cfg.horizon.is_finite() && cfg.horizon > 0.0) {
        return Err(CliError::config("horizon must be positive and finite"));
    }
    let (kind, column, runs) = match &cfg.scenarios {
        Scenarios::Zhou(z) => {
            let mut runs = Vec::new();
            for &eps in &z.eps_values {
                let sc = ZhouScenario::from_epsilon(z.p, z.c, z.big_c, z.c_prime, eps, z.sigma0);
                sc.validate()?;
                if !(eps > 0.0) {
                    return Err(CliError::config("eps_values must be positive"));
                }
                let report = integrate_system(&sc, sc.sigma0, [sc.u0, sc.u1], cfg.horizon, &cfg.options);
                runs.push(Run { parameter: eps, report });
            }
            ("zhou", "epsilon", runs)
        }
        Scenarios::Kato(k) => {
            let mut runs = Vec::new();
            for &k0 in &k.k0_values {
                let sc = KatoScenario {
                    p: k.p,
                    k0,
                    k1: k.k1,
                    a: k.a,
                    q: k.q,
                    r: k.r,
                    t0: k.t0,
                };
                sc.validate()?;
                let report = integrate_system(&sc, sc.t0, sc.initial_state(), cfg.horizon, &cfg.options);
                runs.push(Run { parameter: k0, report });
            }
            ("kato", "k0", runs)
        }
    };
    if runs.is_empty() {
        return Err(CliError::config("no runs requested"));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = runs
        .iter()
        .filter(|r| r.report.blew_up)
        .map(|r| (r.parameter.ln(), r.report.t_extrapolated.ln()))
        .unzip();
    let fit = if xs.len() >= 3 { fit_linear(&xs, &ys).ok() } else { None };

    let mut table = Table::new(&[column, "t_detect", "t_extrapolated", "blew_up"]);
    for r in &runs {
        table.push(vec![
            num(r.parameter),
            num(r.report.t_detect),
            num(r.report.t_extrapolated),
            r.report.blew_up.to_string(),
        ]);
    }
    create_dir(&ctx.out)?;
    table.write(&ctx.out.join("ode_blowup.csv"))?;
    write_json(&ctx.out.join("summary.json"), &Summary { kind, fit, runs })?;
    if let Some(f) = fit {
        println!("slope {} r_squared {}", num(f.slope), num(f.r_squared));
    }
    Ok(())
}
