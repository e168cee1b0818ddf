use std::path::Path;

use epdt_core::ode::BlowupReport;
use epdt_core::pde::{run as run_pde, RadialGrid, RadialState, RadialTrajectory, SimulationConfig};
use serde::{Deserialize, Serialize};

use crate::output::{create_dir, num, write_json, Table};
use crate::{load_json, CliError, Context};

pub const SNAPSHOT_DIR: &str = "snapshots";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SnapshotInfo {
    pub index: usize,
    pub t: f64,
    pub max_abs: f64,
    /// Relative to the run directory.
    pub file: String,
}

/// `summary.json` of a run directory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub config: SimulationConfig,
    pub report: BlowupReport,
    pub cfl_used: f64,
    pub restarts: usize,
    /// Every snapshot vanishes identically.
    pub zero_solution: bool,
    pub snapshots: Vec<SnapshotInfo>,
}

fn snapshot_file(index: usize) -> String {
    format!("{SNAPSHOT_DIR}/snapshot_{index:04}.csv")
}

/// Writes a run directory: `summary.json` and one `(r, u, v)` CSV per
/// snapshot, in the original variables (`v = ∂ₜu`).
pub fn write_run(dir: &Path, config: &SimulationConfig, traj: &RadialTrajectory) -> Result<RunSummary, CliError> {
    create_dir(&dir.join(SNAPSHOT_DIR))?;
    let states = traj.physical()?;
    let nodes = traj.grid().nodes();
    let mut infos = Vec::with_capacity(states.len());
    for (index, s) in states.iter().enumerate() {
        let mut table = Table::new(&["r", "u", "v"]);
        for ((r, u), v) in nodes.iter().zip(&s.u).zip(&s.v) {
            table.push(vec![num(*r), num(*u), num(*v)]);
        }
        let file = snapshot_file(index);
        table.write(&dir.join(&file))?;
        infos.push(SnapshotInfo {
            index,
            t: s.t,
            max_abs: s.max_abs(),
            file,
        });
    }
    let summary = RunSummary {
        config: config.clone(),
        report: *traj.report(),
        cfl_used: traj.cfl_used(),
        restarts: traj.restarts(),
        zero_solution: states.iter().all(|s| s.max_abs() == 0.0),
        snapshots: infos,
    };
    write_json(&dir.join("summary.json"), &summary)?;
    Ok(summary)
}

fn read_snapshot(path: &Path, grid: &RadialGrid, t: f64) -> Result<RadialState, CliError> {
    let fail = |e: String| CliError::config(format!("cannot read snapshot {}: {e}", path.display()));
    let mut reader = csv::Reader::from_path(path).map_err(|e| fail(e.to_string()))?;
    let mut state = RadialState::zeros(t, 0);
    for record in reader.records() {
        let record = record.map_err(|e| fail(e.to_string()))?;
        let field = |i: usize| -> Result<f64, CliError> {
            record
                .get(i)
                .ok_or_else(|| fail(format!("missing column {i}")))?
                .parse::<f64>()
                .map_err(|e| fail(e.to_string()))
        };
        state.u.push(field(1)?);
        state.v.push(field(2)?);
    }
    if state.u.len() != grid.n_points {
        return Err(fail(format!("{} rows for a grid of {} points", state.u.len(), grid.n_points)));
    }
    Ok(state)
}

/// Rebuilds the trajectory of a run directory written by `simulate`.
pub fn read_run(dir: &Path) -> Result<(RunSummary, RadialTrajectory), CliError> {
    let summary: RunSummary = load_json(&dir.join("summary.json"))?;
    let setup = summary.config.to_setup()?;
    let c = setup.validate()?;
    let mut native = Vec::with_capacity(summary.snapshots.len());
    for info in &summary.snapshots {
        let s = read_snapshot(&dir.join(&info.file), &setup.grid, info.t)?;
        let mut out = RadialState::zeros(c.native_time(s.t), s.u.len());
        for j in 0..s.u.len() {
            let (w, wt) = c.to_native(s.t, s.u[j], s.v[j]);
            out.u[j] = w;
            out.v[j] = wt;
        }
        native.push(out);
    }
    let traj = RadialTrajectory::from_snapshots(setup, native, summary.report)?;
    Ok((summary, traj))
}

pub fn run(ctx: &Context) -> Result<(), CliError> {
    let config: SimulationConfig = ctx.load()?;
    let setup = config.to_setup()?;
    let traj = run_pde(&setup)?;
    let summary = write_run(&ctx.out, &config, &traj)?;
    let r = &summary.report;
    println!(
        "snapshots {} blew_up {} t_detect {} t_extrapolated {} zero_solution {}",
        summary.snapshots.len(),
        r.blew_up,
        num(r.t_detect),
        num(r.t_extrapolated),
        summary.zero_solution
    );
    Ok(())
}
