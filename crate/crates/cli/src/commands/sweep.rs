use epdt_core::harness::{lifespan_sweep, FitResult, SweepConfig};
use serde::Serialize;

use crate::output::{create_dir, num, write_json, Table};
use crate::{CliError, Context};

#[derive(Serialize)]
struct Summary<'a> {
    config: &'a SweepConfig,
    fit: Option<FitResult>,
    warnings: &'a [String],
    quality_errors: &'a [String],
}

pub fn run(ctx: &Context) -> Result<(), CliError> {
    let config: SweepConfig = ctx.load()?;
    let result = lifespan_sweep(&config)?;
    create_dir(&ctx.out)?;
    let mut table = Table::new(&[
        "epsilon",
        "t_blow",
        "lifespan",
        "log_lifespan",
        "censored",
        "extrapolated",
        "t_detect",
        "t_extrapolated",
    ]);
    for (i, row) in result.table.iter().enumerate() {
        table.push(vec![
            num(row.epsilon),
            num(row.t_blow),
            num(row.lifespan),
            num(row.log_lifespan),
            row.censored.to_string(),
            row.extrapolated.to_string(),
            num(row.report.t_detect),
            num(row.report.t_extrapolated),
        ]);
        let dir = ctx.out.join(format!("run_{i:02}"));
        create_dir(&dir)?;
        write_json(&dir.join("summary.json"), row)?;
    }
    table.write(&ctx.out.join("sweep.csv"))?;
    write_json(
        &ctx.out.join("summary.json"),
        &Summary {
            config: &config,
            fit: result.fit,
            warnings: &result.warnings,
            quality_errors: &result.quality_errors,
        },
    )?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(f) = result.fit {
        println!("slope {} intercept {} r_squared {}", num(f.slope), num(f.intercept), num(f.r_squared));
    }
    if !result.quality_errors.is_empty() {
        return Err(CliError::numerical(format!(
            "lifespans are not monotone in ε: {}",
            result.quality_errors.join("; ")
        )));
    }
    Ok(())
}
