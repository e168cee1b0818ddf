//! Least-squares fits and lifespan sweeps.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{check_theorem2_hypotheses, ModelParams};
use crate::ode::{integrate_system, BlowupOptions, BlowupReport, ZhouScenario};
use crate::pde::{run, EquationForm, RadialGrid, RunOptions, RunSetup};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

/// Ordinary least-squares line `y = slope·x + intercept`.
pub fn fit_linear(xs: &[f64], ys: &[f64]) -> Result<FitResult> {
    if xs.len() != ys.len() {
        return Err(Error::domain(format!(
            "fit needs equal lengths, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len();
    if n < 3 {
        return Err(Error::domain(format!("fit needs at least 3 points, got {n}")));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::domain("fit inputs must be finite"));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if !(sxx > f64::EPSILON * xs.iter().map(|x| x * x).sum::<f64>()) {
        return Err(Error::domain("fit needs x values with nonzero spread"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(FitResult {
        slope,
        intercept,
        r_squared,
        n_points: n,
    })
}

/// Every number written to CSV or JSON tables: 17 significant digits in
/// scientific notation, so outputs round-trip bit for bit.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepTarget {
    Pde,
    ZhouSurrogate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMode {
    /// `log T` against `ε^{−p(p−1)}`.
    LogVsInversePower,
    /// `log T` against `log ε`.
    Loglog,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PdeSweepSettings {
    pub n_points: usize,
    pub cfl: f64,
    /// Extra room past the support bound at the horizon.
    pub margin: f64,
    pub form: EquationForm,
}

impl Default for PdeSweepSettings {
    fn default() -> Self {
        PdeSweepSettings {
            n_points: 1024,
            cfl: 0.4,
            margin: 0.5,
            form: EquationForm::Original,
        }
    }
}

/// Data constants of the surrogate ODE `U'' + 2U' = cσ^{1−p}U^p`, started
/// from `U(σ₀) = Cε^pσ₀`, `U'(σ₀) = C'ε^p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ZhouSweepSettings {
    pub c: f64,
    #[serde(rename = "C")]
    pub big_c: f64,
    #[serde(rename = "C_prime")]
    pub c_prime: f64,
    pub sigma0: f64,
}

impl Default for ZhouSweepSettings {
    fn default() -> Self {
        ZhouSweepSettings {
            c: 1.0,
            big_c: 1.0,
            c_prime: 1.0,
            sigma0: 1.0,
        }
    }
}

/// Largest PDE grid and ε count accepted in a sweep.
pub const PDE_MAX_POINTS: usize = 2048;
pub const PDE_MAX_EPS: usize = 6;

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub base: ModelParams,
    /// Strictly decreasing, at least 4 values.
    pub eps_values: Vec<f64>,
    pub target: SweepTarget,
    pub fit_mode: FitMode,
    /// Final time of each run: `t` for the PDE, `σ` for the surrogate.
    pub horizon: f64,
    #[serde(default)]
    pub pde: PdeSweepSettings,
    #[serde(default)]
    pub zhou: ZhouSweepSettings,
    /// Refuse PDE sweeps whose parameters fail the lifespan theorem's
    /// hypotheses.
    #[serde(default = "yes")]
    pub require_hypotheses: bool,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.eps_values.len() < 4 {
            return Err(Error::Config(format!(
                "eps_values needs at least 4 entries, got {}",
                self.eps_values.len()
            )));
        }
        if self.eps_values.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return Err(Error::Config("eps_values must be positive and finite".into()));
        }
        if self.eps_values.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config("eps_values must be strictly decreasing".into()));
        }
        if !(self.horizon > 1.0 && self.horizon.is_finite()) {
            return Err(Error::Config(format!("horizon must be > 1, got {}", self.horizon)));
        }
        if self.target == SweepTarget::Pde {
            if self.pde.n_points > PDE_MAX_POINTS {
                return Err(Error::Config(format!(
                    "PDE sweeps are capped at n_points = {PDE_MAX_POINTS}"
                )));
            }
            if self.eps_values.len() > PDE_MAX_EPS {
                return Err(Error::Config(format!(
                    "PDE sweeps are capped at {PDE_MAX_EPS} ε values"
                )));
            }
            if !self.pde.form.is_nonlinear() {
                return Err(Error::Config("PDE sweeps need a nonlinear form".into()));
            }
            if self.require_hypotheses {
                let report = check_theorem2_hypotheses(&self.base);
                if !report.admissible {
                    return Err(Error::Config(format!(
                        "parameters fail the lifespan hypotheses: {}",
                        report.reasons.join("; ")
                    )));
                }
            }
        } else {
            let z = &self.zhou;
            if !(z.c > 0.0 && z.big_c > 0.0 && z.c_prime > 0.0 && z.sigma0 > 0.0) {
                return Err(Error::Config("zhou constants must be positive".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub epsilon: f64,
    /// Blow-up time in the run's own time variable (`t` or `σ`).
    pub t_blow: f64,
    /// Lifespan in the original time: `t_blow` for the PDE, `e^σ − 1` for
    /// the surrogate (from `1 + t = e^σ`).
    pub lifespan: f64,
    /// `ln(lifespan)`, computed without overflow.
    pub log_lifespan: f64,
    /// The run reached the horizon without blowing up.
    pub censored: bool,
    pub extrapolated: bool,
    pub report: BlowupReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub target: SweepTarget,
    pub fit_mode: FitMode,
    /// Sorted by ε, descending.
    pub table: Vec<SweepRow>,
    pub fit: Option<FitResult>,
    pub warnings: Vec<String>,
    /// Violations of monotonicity in ε.
    pub quality_errors: Vec<String>,
}

/// `ln(e^σ − 1)` for `σ > 0`.
fn log_expm1(sigma: f64) -> f64 {
    if sigma > 30.0 {
        sigma + (-(-sigma).exp()).ln_1p()
    } else {
        sigma.exp_m1().ln()
    }
}

fn run_one(config: &SweepConfig, eps: f64) -> Result<SweepRow> {
    let params = config.base.with_epsilon(eps);
    match config.target {
        SweepTarget::ZhouSurrogate => {
            let z = &config.zhou;
            let sc = ZhouScenario::from_epsilon(params.p, z.c, z.big_c, z.c_prime, eps, z.sigma0);
            sc.validate()?;
            let report = integrate_system(&sc, sc.sigma0, [sc.u0, sc.u1], config.horizon, &BlowupOptions::default());
            let sigma = report.t_extrapolated;
            Ok(SweepRow {
                epsilon: eps,
                t_blow: sigma,
                lifespan: sigma.exp_m1(),
                log_lifespan: log_expm1(sigma),
                censored: !report.blew_up,
                extrapolated: report.extrapolated,
                report,
            })
        }
        SweepTarget::Pde => {
            let s = &config.pde;
            let grid = RadialGrid::for_horizon(&params, config.horizon, s.n_points, s.margin)?;
            let setup = RunSetup::new(s.form, params, grid, config.horizon).with_options(RunOptions {
                cfl: s.cfl,
                ..RunOptions::default()
            });
            let tr = run(&setup)?;
            let report = *tr.report();
            // The threshold crossing is robust; the extrapolated time is a
            // heuristic and only reported.
            let t = report.t_detect;
            Ok(SweepRow {
                epsilon: eps,
                t_blow: t,
                lifespan: t,
                log_lifespan: t.ln(),
                censored: !report.blew_up,
                extrapolated: report.extrapolated,
                report,
            })
        }
    }
}

/// Runs every ε concurrently, tabulates the lifespans and fits them
/// according to the fit mode. Censored runs stay in the table but not in
/// the fit.
pub fn lifespan_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let rows: Vec<SweepRow> = config
        .eps_values
        .par_iter()
        .map(|&eps| run_one(config, eps))
        .collect::<Result<_>>()?;
    let mut warnings = Vec::new();
    let mut quality_errors = Vec::new();
    for r in rows.iter().filter(|r| r.censored) {
        warnings.push(format!(
            "ε = {} did not blow up before the horizon {}; excluded from the fit",
            r.epsilon, config.horizon
        ));
    }
    let live: Vec<&SweepRow> = rows.iter().filter(|r| !r.censored).collect();
    for w in live.windows(2) {
        if w[1].lifespan < w[0].lifespan {
            quality_errors.push(format!(
                "lifespan decreased from {} at ε = {} to {} at ε = {}",
                w[0].lifespan, w[0].epsilon, w[1].lifespan, w[1].epsilon
            ));
        }
    }
    let p = config.base.p;
    let (xs, ys): (Vec<f64>, Vec<f64>) = live
        .iter()
        .map(|r| match config.fit_mode {
            FitMode::Loglog => (r.epsilon.ln(), r.t_blow.ln()),
            FitMode::LogVsInversePower => (r.epsilon.powf(-p * (p - 1.0)), r.log_lifespan),
        })
        .unzip();
    let fit = if xs.len() >= 3 {
        Some(fit_linear(&xs, &ys)?)
    } else {
        warnings.push(format!(
            "only {} uncensored runs; no fit",
            xs.len()
        ));
        None
    };
    Ok(SweepResult {
        target: config.target,
        fit_mode: config.fit_mode,
        table: rows,
        fit,
        warnings,
        quality_errors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_line() {
        let xs = [0.0, 1.0, 2.0, 5.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        let f = fit_linear(&xs, &ys).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14);
        assert!((f.intercept - 1.0).abs() < 1e-14);
        assert!((f.r_squared - 1.0).abs() < 1e-14);
        assert_eq!(f.n_points, 4);
    }

    #[test]
    fn constant_values() {
        let f = fit_linear(&[1.0, 2.0, 3.0], &[4.0, 4.0, 4.0]).unwrap();
        assert_eq!(f.slope, 0.0);
        assert_eq!(f.intercept, 4.0);
    }

    #[test]
    fn noisy_slope() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let xs: Vec<f64> = (0..50).map(|i| f64::from(i) / 10.0).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| {
                // Box–Muller for N(0, 0.01²)
                let (u1, u2): (f64, f64) = (rng.gen(), rng.gen());
                let g = (-2.0 * (1.0 - u1).ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
                3.0 * x + 0.01 * g
            })
            .collect();
        let f = fit_linear(&xs, &ys).unwrap();
        assert!((2.9..=3.1).contains(&f.slope));
        assert!(f.r_squared >= 0.99);
    }

    #[test]
    fn numbers_have_seventeen_digits() {
        assert_eq!(format_number(0.1), "1.0000000000000001e-1");
        assert_eq!(format_number(-2.0), "-2.0000000000000000e0");
        for x in [std::f64::consts::PI, 1e-300, 6.02e23] {
            assert_eq!(format_number(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn overflow_free_log_lifespan() {
        assert!((log_expm1(2.0) - (2f64.exp() - 1.0).ln()).abs() < 1e-15);
        assert!((log_expm1(1e6) - 1e6).abs() < 1e-9);
        assert!((log_expm1(1e-3) - (1e-3f64).exp_m1().ln()).abs() < 1e-12);
    }

    fn zhou_config(p: f64, eps: Vec<f64>) -> SweepConfig {
        SweepConfig {
            base: ModelParams::new(0.0, 3, 0.0, 0.0, p),
            eps_values: eps,
            target: SweepTarget::ZhouSurrogate,
            fit_mode: FitMode::Loglog,
            horizon: 1e9,
            pde: PdeSweepSettings::default(),
            zhou: ZhouSweepSettings::default(),
            require_hypotheses: true,
        }
    }

    #[test]
    fn surrogate_loglog_slope() {
        let r = lifespan_sweep(&zhou_config(2.0, vec![0.3, 0.1, 0.03, 0.01])).unwrap();
        let fit = r.fit.unwrap();
        assert!((fit.slope + 2.0).abs() <= 0.3, "{fit:?}");
        assert!(r.quality_errors.is_empty() && r.warnings.is_empty());
        let eps: Vec<f64> = r.table.iter().map(|row| row.epsilon).collect();
        assert_eq!(eps, vec![0.3, 0.1, 0.03, 0.01]);
    }

    #[test]
    fn surrogate_critical_law_is_linear() {
        let mut c = zhou_config(2.0, vec![0.3, 0.2, 0.1, 0.05, 0.03]);
        c.fit_mode = FitMode::LogVsInversePower;
        let fit = lifespan_sweep(&c).unwrap().fit.unwrap();
        assert!(fit.slope > 0.0);
        assert!(fit.r_squared >= 0.95, "{fit:?}");
    }

    #[test]
    fn short_horizon_censors_small_data() {
        let mut c = zhou_config(2.0, vec![0.5, 0.3, 0.1, 0.01]);
        c.horizon = 2e3;
        let r = lifespan_sweep(&c).unwrap();
        assert!(r.table.last().unwrap().censored);
        assert!(!r.table[0].censored);
        assert!(!r.warnings.is_empty());
    }

    #[test]
    fn sweep_config_validation() {
        let bad = zhou_config(2.0, vec![0.1, 0.2, 0.05, 0.01]);
        assert!(matches!(lifespan_sweep(&bad), Err(Error::Config(_))));
        let short = zhou_config(2.0, vec![0.1, 0.05, 0.01]);
        assert!(matches!(lifespan_sweep(&short), Err(Error::Config(_))));
        let mut pde = zhou_config(2.0, vec![1.0, 0.8, 0.6, 0.4]);
        pde.target = SweepTarget::Pde;
        pde.base = ModelParams::new(0.0, 1, 0.0, 0.0, 2.0);
        // n = 1 with μ = 0 fails δ < (m+1)²n².
        assert!(matches!(lifespan_sweep(&pde), Err(Error::Config(_))));
        pde.pde.n_points = 4096;
        pde.require_hypotheses = false;
        assert!(matches!(lifespan_sweep(&pde), Err(Error::Config(_))));
    }

    #[test]
    fn pde_sweep_lifespans_decrease() {
        let c = SweepConfig {
            base: ModelParams::new(0.0, 1, 0.0, 0.0, 2.0),
            eps_values: vec![2.0, 1.5, 1.0, 0.7],
            target: SweepTarget::Pde,
            fit_mode: FitMode::Loglog,
            horizon: 30.0,
            pde: PdeSweepSettings {
                n_points: 512,
                ..PdeSweepSettings::default()
            },
            zhou: ZhouSweepSettings::default(),
            require_hypotheses: false,
        };
        let r = lifespan_sweep(&c).unwrap();
        assert!(r.table.iter().all(|row| !row.censored), "{:?}", r.table);
        assert!(r.quality_errors.is_empty(), "{:?}", r.quality_errors);
        assert!(r.fit.unwrap().slope < 0.0);
    }

    #[test]
    fn sweep_config_json() {
        let json = r#"{"base":{"m":0,"n":3,"mu":0,"nu":0,"p":2,"epsilon":1,"M":0.5},
            "eps_values":[0.3,0.1,0.03,0.01],"target":"zhou_surrogate","fit_mode":"loglog",
            "horizon":1e9,"zhou":{"c":2}}"#;
        let c: SweepConfig = serde_json::from_str(json).unwrap();
        assert_eq!(c.zhou.c, 2.0);
        assert_eq!(c.zhou.big_c, 1.0);
        assert!(c.require_hypotheses);
        assert_eq!(c.pde.n_points, 1024);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(fit_linear(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(fit_linear(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(fit_linear(&[1.0, 2.0, f64::NAN], &[1.0, 2.0, 3.0]).is_err());
        assert!(fit_linear(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
    }
}
