use epdt_core::model::admissible_beta_interval;
use epdt_core::test_functions::{
    conjugate_residual, hypergeometric_ode_residual, lambda_equation_residual, lambda_t, phi_beta, psi_beta,
    TestFunctionSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ParamsInput;
use crate::output::{create_dir, num, write_json, Table};
use crate::{CliError, Context};

/// Normalised residual bounds for each table.
pub const PSI_BOUND: f64 = 1e-9;
pub const LAMBDA_BOUND: f64 = 1e-4;
pub const CONE_BOUND: f64 = 1e-5;

#[derive(Deserialize)]
struct VerifyConfig {
    #[serde(flatten)]
    params: ParamsInput,
    /// Defaults to the midpoint of the admissible interval.
    #[serde(default)]
    beta: Option<f64>,
    #[serde(default = "default_z")]
    z_values: Vec<f64>,
    #[serde(default = "default_t")]
    t_values: Vec<f64>,
    /// Random interior points of the cone, drawn with `--seed`.
    #[serde(default = "default_cone_points")]
    cone_points: usize,
    /// Largest `t` of the random cone points.
    #[serde(default = "default_t_max")]
    cone_t_max: f64,
}

fn default_z() -> Vec<f64> {
    let mut z: Vec<f64> = (0..10).map(|i| f64::from(i) / 10.0).collect();
    z.push(0.99);
    z
}

fn default_t() -> Vec<f64> {
    (0..19).map(|i| 1.0 + f64::from(i) * 0.5).collect()
}

fn default_cone_points() -> usize {
    20
}

fn default_t_max() -> f64 {
    3.0
}

#[derive(Serialize)]
struct Summary {
    beta: f64,
    seed: u64,
    psi_rows: usize,
    lambda_rows: usize,
    cone_rows: usize,
    failures: usize,
}

struct Checked {
    table: Table,
    failures: usize,
}

impl Checked {
    fn new() -> Self {
        Checked {
            table: Table::new(&["beta", "z_or_t", "value", "residual", "bound"]),
            failures: 0,
        }
    }

    fn push(&mut self, beta: f64, at: f64, value: f64, residual: f64, bound: f64) {
        if !(residual <= bound) {
            self.failures += 1;
        }
        self.table
            .push(vec![num(beta), num(at), num(value), num(residual), num(bound)]);
    }
}

pub fn run(ctx: &Context) -> Result<(), CliError> {
    let cfg: VerifyConfig = ctx.load()?;
    let params = cfg.params.params();
    params.validate()?;
    let interval = admissible_beta_interval(&params)?;
    let beta = match cfg.beta {
        Some(b) => b,
        None => interval
            .midpoint()
            .ok_or_else(|| CliError::config("the admissible β interval is empty; give beta explicitly"))?,
    };
    if cfg.z_values.iter().any(|z| !(0.0..1.0).contains(z)) {
        return Err(CliError::config("z_values must lie in [0, 1)"));
    }
    if cfg.t_values.iter().any(|t| !(*t >= 1.0)) {
        return Err(CliError::config("t_values must be ≥ 1"));
    }
    if !(cfg.cone_t_max > 1.0) {
        return Err(CliError::config("cone_t_max must be > 1"));
    }
    let spec = TestFunctionSpec::new(beta, params)?;

    let mut psi = Checked::new();
    for &z in &cfg.z_values {
        let (res, scale) = hypergeometric_ode_residual(&spec, z)?;
        let rel = if scale > 0.0 { res.abs() / scale } else { res.abs() };
        psi.push(beta, z, psi_beta(&spec, z)?, rel, PSI_BOUND);
    }

    let mut lambda = Checked::new();
    for &t in &cfg.t_values {
        let r = lambda_equation_residual(params.m, t, 1e-3)?;
        lambda.push(beta, t, lambda_t(params.m, t)?, r.normalized(), LAMBDA_BOUND);
    }

    let mut cone = Checked::new();
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let k = params.m + 1.0;
    for _ in 0..cfg.cone_points {
        let t: f64 = rng.gen_range(1.0..cfg.cone_t_max);
        let z: f64 = rng.gen_range(0.01..0.9);
        let r = z.sqrt() * t.powf(k) / k;
        let report = conjugate_residual(&spec, t, r)?;
        cone.push(beta, z, phi_beta(&spec, t, r)?, report.normalized(), CONE_BOUND);
    }

    create_dir(&ctx.out)?;
    psi.table.write(&ctx.out.join("psi.csv"))?;
    lambda.table.write(&ctx.out.join("lambda.csv"))?;
    cone.table.write(&ctx.out.join("conjugate.csv"))?;
    let failures = psi.failures + lambda.failures + cone.failures;
    write_json(
        &ctx.out.join("summary.json"),
        &Summary {
            beta,
            seed: ctx.seed,
            psi_rows: cfg.z_values.len(),
            lambda_rows: cfg.t_values.len(),
            cone_rows: cfg.cone_points,
            failures,
        },
    )?;
    println!("beta {} failures {failures}", num(beta));
    if failures > 0 {
        return Err(CliError::numerical(format!("{failures} residuals exceed their bounds")));
    }
    Ok(())
}
