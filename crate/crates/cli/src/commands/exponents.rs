use epdt_core::model::{admissible_beta_interval, check_theorem2_hypotheses, RegimeReport};
use serde::Serialize;

use super::ParamsInput;
use crate::output::{create_dir, num, write_json};
use crate::{CliError, Context};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

/// Position of `p` relative to `max(p_S, p_F)`.
pub fn regime(p: f64, report: &RegimeReport) -> Regime {
    let critical = report.p_strauss.max(report.p_fujita);
    if critical.is_infinite() || p < critical - 1e-12 * critical {
        Regime::Subcritical
    } else if p <= critical + 1e-12 * critical {
        Regime::Critical
    } else {
        Regime::Supercritical
    }
}

#[derive(Serialize)]
struct Summary {
    report: RegimeReport,
    regime: Regime,
    beta_lower: Option<f64>,
    beta_upper: Option<f64>,
}

fn value(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        num(x)
    }
}

fn enum_name<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

pub fn run(ctx: &Context) -> Result<(), CliError> {
    let input: ParamsInput = ctx.load()?;
    let params = input.params();
    params.validate()?;
    let report = check_theorem2_hypotheses(&params);
    let regime = regime(params.p, &report);
    let interval = admissible_beta_interval(&params).ok().filter(|iv| !iv.is_empty());
    let rows: Vec<(&str, String)> = vec![
        ("m", num(params.m)),
        ("n", params.n.to_string()),
        ("mu", num(params.mu)),
        ("nu", num(params.nu)),
        ("p", num(params.p)),
        ("delta", num(report.delta)),
        ("delta_class", enum_name(&report.delta_class)),
        ("p_S", value(report.p_strauss)),
        ("p_F", value(report.p_fujita)),
        ("dominant", enum_name(&report.dominant_exponent)),
        ("regime", enum_name(&regime)),
        (
            "beta_range",
            interval.map_or_else(|| "empty".into(), |iv| {
                let open = if iv.lower_closed { "[" } else { "(" };
                format!("{open}{}, {})", num(iv.lower), num(iv.upper))
            }),
        ),
        ("admissible", report.admissible.to_string()),
    ];
    for (k, v) in &rows {
        println!("{k:<12}{v}");
    }
    for reason in &report.reasons {
        println!("{:<12}{reason}", "reason");
    }
    create_dir(&ctx.out)?;
    write_json(
        &ctx.out.join("summary.json"),
        &Summary {
            regime,
            beta_lower: interval.map(|iv| iv.lower),
            beta_upper: interval.map(|iv| iv.upper),
            report,
        },
    )
}
