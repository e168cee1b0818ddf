use epdt_core::functionals::compute_series;
use epdt_core::harness::fit_linear;
use epdt_core::model::{admissible_beta_interval, predicted_linear_decay, strauss_exponent, DecayCase};
use epdt_core::pde::{run, EquationForm, RadialGrid, RunSetup};
use epdt_core::special::gauss_2f1_at_one;
use epdt_core::test_functions::{psi_beta, TestFunctionSpec};
use epdt_core::ModelParams;
use proptest::prelude::*;

fn l2_decay_slope(params: ModelParams, n_points: usize) -> f64 {
    let t_end = 50.0;
    let grid = RadialGrid::for_horizon(&params, t_end, n_points, 0.5).unwrap();
    let times: Vec<f64> = (0..=45).map(|i| 5.0 + f64::from(i)).collect();
    let tr = run(&RunSetup::new(EquationForm::Linear, params, grid, t_end).with_output_times(times)).unwrap();
    let (xs, ys): (Vec<f64>, Vec<f64>) = tr
        .physical()
        .unwrap()
        .iter()
        .map(|s| {
            let sq: Vec<f64> = s.u.iter().map(|x| x * x).collect();
            (s.t.ln(), 0.5 * grid.integrate(params.n, &sq, grid.n_points - 1).ln())
        })
        .collect::<Vec<_>>()
        .into_iter()
        .unzip();
    fit_linear(&xs, &ys).unwrap().slope
}

#[test]
fn linear_decay_above_threshold() {
    // δ = 1/4, threshold √δ/2 + 1/2 − 3/2 < 0: rate t^{−(μ+m)/2}
    let params = ModelParams::new(0.0, 3, 1.5, 0.0, 2.0);
    let pred = predicted_linear_decay(0.0, &params).unwrap();
    assert_eq!(pred.case, DecayCase::AboveThreshold);
    let slope = l2_decay_slope(params, 1024);
    assert!((slope / pred.time_exponent - 1.0).abs() <= 0.10, "{slope} vs {}", pred.time_exponent);
}

#[test]
fn linear_decay_below_threshold() {
    let params = ModelParams::new(0.0, 1, 4.0, 0.0, 2.0);
    let pred = predicted_linear_decay(0.0, &params).unwrap();
    assert_eq!(pred.case, DecayCase::BelowThreshold);
    let slope = l2_decay_slope(params, 1024);
    assert!((slope / pred.time_exponent - 1.0).abs() <= 0.10, "{slope} vs {}", pred.time_exponent);
}

#[test]
fn functionals_are_nonnegative_for_nonnegative_data() {
    let params = ModelParams::new(0.5, 2, 2.0, 0.0, 3.0)
        .with_epsilon(0.5)
        .with_support_radius(0.4);
    let grid = RadialGrid::new(3.0, 201).unwrap();
    let tr = run(&RunSetup::new(EquationForm::Original, params, grid, 2.5).with_uniform_outputs(41)).unwrap();
    let spec = TestFunctionSpec::new(0.5, params).unwrap();
    let s = compute_series(&tr, &spec).unwrap();
    for series in [&s.h, &s.i, &s.j, &s.f, &s.g] {
        assert!(series.iter().all(|v| *v >= 0.0), "{series:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn strauss_root_solves_its_quadratic(n in 1u32..8, m in 0.0f64..4.0, mu in 0.0f64..8.0) {
        let k = m + 1.0;
        let nf = f64::from(n);
        prop_assume!(k * nf - 1.0 + mu > 1e-6);
        let p = strauss_exponent(n, m, mu).unwrap();
        let res = (k * nf - 1.0 + mu) * p * p - (k * (nf - 2.0) + 3.0 + mu) * p - 2.0 * k;
        prop_assert!(res.abs() <= 1e-10 * (1.0 + p * p), "residual {}", res);
        prop_assert!(p > 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn psi_is_at_least_one_and_increasing(
        m in 0.0f64..1.5,
        n in 1u32..5,
        mu in 0.0f64..5.0,
        nu in 0.0f64..1.0,
        s in 0.05f64..0.95,
    ) {
        let params = ModelParams::new(m, n, mu, nu, 2.0);
        prop_assume!(params.delta() > 0.05);
        let iv = admissible_beta_interval(&params).unwrap();
        prop_assume!(!iv.is_empty());
        let spec = TestFunctionSpec::new(iv.interpolate(s).unwrap(), params).unwrap();
        let mut prev = 1.0 - 1e-9;
        for i in 0..=99 {
            let z = f64::from(i) / 100.0;
            let v = psi_beta(&spec, z).unwrap();
            prop_assert!(v >= prev, "z={} ψ={} previous {}", z, v, prev);
            prev = v;
        }
        let limit = gauss_2f1_at_one(spec.hyp).unwrap();
        prop_assert!(prev <= limit * (1.0 + 1e-12), "ψ(0.99)={} above ψ(1)={}", prev, limit);
    }
}
