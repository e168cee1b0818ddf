use super::forms::EquationForm;
use super::solver::{run, RadialTrajectory, RunSetup};
use crate::error::{Error, Result};
use crate::test_functions::ResidualReport;

/// Largest `|u_a − u_b|` over snapshots present in both lists and the nodes of
/// the coarser grid; `stride_b` maps coarse node `j` to node `j·stride_b`.
fn max_difference(
    a: &[super::RadialState],
    b: &[super::RadialState],
    stride_b: usize,
) -> Result<ResidualReport> {
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    let mut count = 0;
    for (sa, sb) in a.iter().zip(b) {
        if (sa.t - sb.t).abs() > 1e-9 * sa.t.abs().max(1.0) {
            return Err(Error::domain(format!(
                "snapshot times differ: {} vs {}",
                sa.t, sb.t
            )));
        }
        for (j, ua) in sa.u.iter().enumerate() {
            let ub = sb.u[j * stride_b];
            worst = worst.max((ua - ub).abs());
            scale = scale.max(ua.abs());
            count += 1;
        }
    }
    Ok(ResidualReport {
        max_abs_residual: worst,
        scale,
        sample_points: count,
    })
}

/// Re-solves the problem of `trajectory` natively in the `target` form, with
/// the initial data mapped into its variables, and reports the largest
/// pointwise difference of `u` after mapping both back to the original
/// unknown. Snapshots after either run blew up are not compared.
pub fn transform_roundtrip(trajectory: &RadialTrajectory, target: EquationForm) -> Result<ResidualReport> {
    let source = trajectory.form();
    if source.is_nonlinear() != target.is_nonlinear() {
        return Err(Error::domain(format!(
            "cannot compare the {} form with the {} form",
            source.name(),
            target.name()
        )));
    }
    let params = &trajectory.setup().params;
    // Surfaces δ mismatches before any work.
    target.coefficients(params)?;
    let here = trajectory.physical()?;
    if target == source {
        return Ok(ResidualReport {
            max_abs_residual: 0.0,
            scale: here.iter().map(|s| s.max_abs()).fold(0.0, f64::max),
            sample_points: here.iter().map(|s| s.u.len()).sum(),
        });
    }
    let other = run(&trajectory.setup().clone().with_form(target))?;
    max_difference(&here, &other.physical()?, 1)
}

/// Richardson-style estimate of the spatial truncation error of a run: the
/// largest difference in `u` between the run and the same run on the grid
/// with halved cells, at shared nodes and snapshots.
pub fn native_truncation_error(setup: &RunSetup) -> Result<ResidualReport> {
    let coarse = run(setup)?;
    let fine = run(&setup.clone().with_grid(setup.grid.refined()))?;
    max_difference(&coarse.physical()?, &fine.physical()?, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;
    use crate::pde::RadialGrid;

    fn setup(params: ModelParams, form: EquationForm) -> RunSetup {
        let grid = RadialGrid::for_horizon(&params, 2.5, 161, 0.5).unwrap();
        RunSetup::new(form, params, grid, 2.5).with_uniform_outputs(7)
    }

    #[test]
    fn identity_direction_is_exact() {
        let p = ModelParams::new(0.0, 2, 3.0, 0.0, 2.0).with_epsilon(0.3);
        let tr = run(&setup(p, EquationForm::Original)).unwrap();
        let r = transform_roundtrip(&tr, EquationForm::Original).unwrap();
        assert_eq!(r.max_abs_residual, 0.0);
        assert!(r.scale > 0.0);
    }

    #[test]
    fn liouville_time_agrees_with_original() {
        let p = ModelParams::new(1.0, 2, 2.5, 0.4, 2.0).with_epsilon(0.5);
        let tr = run(&setup(p, EquationForm::Original)).unwrap();
        let native = native_truncation_error(&setup(p, EquationForm::Original)).unwrap();
        for form in [EquationForm::Dissipative, EquationForm::Liouville] {
            let r = transform_roundtrip(&tr, form).unwrap();
            assert!(
                r.max_abs_residual <= 10.0 * native.max_abs_residual,
                "{form:?}: {} vs native {}",
                r.max_abs_residual,
                native.max_abs_residual
            );
        }
    }

    #[test]
    fn mismatched_forms_are_refused() {
        let p = ModelParams::new(0.0, 2, 3.0, 0.0, 2.0).with_epsilon(0.3);
        let tr = run(&setup(p, EquationForm::Original)).unwrap();
        assert!(matches!(
            transform_roundtrip(&tr, EquationForm::Delta1),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            transform_roundtrip(&tr, EquationForm::Linear),
            Err(Error::Domain(_))
        ));
    }
}
