use std::path::PathBuf;

use epdt_core::functionals::{
    check_lemma41, compute_series, g_lower_bound_check, holder_envelope, identity_e1_series, Envelope, GBand,
};
use epdt_core::model::admissible_beta_interval;
use epdt_core::test_functions::{ResidualReport, TestFunctionSpec};
use serde::{Deserialize, Serialize};

use super::simulate::read_run;
use crate::output::{create_dir, num, write_json, Table};
use crate::{CliError, Context};

#[derive(Deserialize)]
struct FunctionalsConfig {
    /// A directory written by `simulate`; relative paths start at the config file.
    run_dir: PathBuf,
    /// Defaults to the midpoint of the admissible interval.
    #[serde(default)]
    beta: Option<f64>,
    /// Start of the window of the `G` band (`δ = 1` only).
    #[serde(default = "default_t0")]
    t0: f64,
}

fn default_t0() -> f64 {
    2.0
}

#[derive(Serialize)]
struct Summary {
    beta: f64,
    identity: ResidualReport,
    identity_relative: f64,
    lemma41_all: bool,
    g_band: Option<GBand>,
    envelope: Option<Envelope>,
    notes: Vec<String>,
}

pub fn run(ctx: &Context) -> Result<(), CliError> {
    let cfg: FunctionalsConfig = ctx.load()?;
    let (summary, traj) = read_run(&ctx.resolve(&cfg.run_dir))?;
    let params = summary.config.params;
    let beta = match cfg.beta {
        Some(b) => b,
        None => admissible_beta_interval(&params)?
            .midpoint()
            .ok_or_else(|| CliError::config("the admissible β interval is empty"))?,
    };
    let spec = TestFunctionSpec::new(beta, params)?;
    let series = compute_series(&traj, &spec)?;
    let identity = identity_e1_series(&traj, &spec)?;
    let lemma = check_lemma41(&series)?;
    if identity.lhs.len() != series.len() || lemma.len() != series.len() {
        return Err(CliError::numerical("functional series and identity series differ in length"));
    }
    let mut notes = Vec::new();
    let g_band = if (params.delta() - 1.0).abs() <= 1e-12 {
        Some(g_lower_bound_check(&traj, cfg.t0)?)
    } else {
        notes.push("G band skipped: needs δ = 1".to_owned());
        None
    };
    let envelope = match holder_envelope(&traj) {
        Ok(e) => Some(e),
        Err(e) => {
            notes.push(format!("Hölder envelope skipped: {e}"));
            None
        }
    };

    let mut table = Table::new(&["t", "H", "I", "J", "F", "G", "E1_lhs", "E1_rhs", "lemma41_ok"]);
    for k in 0..series.len() {
        table.push(vec![
            num(series.times[k]),
            num(series.h[k]),
            num(series.i[k]),
            num(series.j[k]),
            num(series.f[k]),
            num(series.g[k]),
            num(identity.lhs[k]),
            num(identity.rhs[k]),
            lemma[k].to_string(),
        ]);
    }
    create_dir(&ctx.out)?;
    table.write(&ctx.out.join("functionals.csv"))?;
    let report = identity.report();
    let out = Summary {
        beta,
        identity: report,
        identity_relative: report.normalized(),
        lemma41_all: lemma.iter().all(|&ok| ok),
        g_band,
        envelope,
        notes,
    };
    write_json(&ctx.out.join("summary.json"), &out)?;
    println!(
        "samples {} identity_relative {} lemma41_all {}",
        series.len(),
        num(out.identity_relative),
        out.lemma41_all
    );
    Ok(())
}
