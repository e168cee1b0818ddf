//! Model parameters and the closed-form exponent algebra.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance used when comparing exponents; closer values are ties.
pub const EXPONENT_TIE_TOL: f64 = 1e-12;

/// Parameters of the Cauchy problem.
///
/// `delta` is never stored; it is always recomputed from `mu` and `nu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Tricomi degeneracy power.
    pub m: f64,
    /// Space dimension.
    pub n: u32,
    /// Scale-invariant damping coefficient.
    pub mu: f64,
    /// Scale-invariant mass coefficient.
    pub nu: f64,
    /// Power of the nonlinearity.
    pub p: f64,
    /// Size of the initial data.
    pub epsilon: f64,
    /// Radius of the ball containing the support of the data.
    #[serde(rename = "M")]
    pub support_radius: f64,
}

impl ModelParams {
    pub fn new(m: f64, n: u32, mu: f64, nu: f64, p: f64) -> Self {
        ModelParams {
            m,
            n,
            mu,
            nu,
            p,
            epsilon: 1.0,
            support_radius: 0.5 / (m + 1.0),
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_support_radius(mut self, radius: f64) -> Self {
        self.support_radius = radius;
        self
    }

    pub fn delta(&self) -> f64 {
        delta_of(self.mu, self.nu)
    }

    pub fn speed(&self) -> CharacteristicSpeed {
        CharacteristicSpeed { m: self.m }
    }

    pub fn dim(&self) -> f64 {
        f64::from(self.n)
    }

    /// Field ranges shared by every workflow. `epsilon = 0` is allowed so the
    /// trivial solution can be exercised.
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.m,
            self.mu,
            self.nu,
            self.p,
            self.epsilon,
            self.support_radius,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Config("model parameters must be finite".into()));
        }
        if self.m < 0.0 {
            return Err(Error::Config(format!("m must be ≥ 0, got {}", self.m)));
        }
        if self.n == 0 {
            return Err(Error::Config("n must be ≥ 1".into()));
        }
        if self.mu < 0.0 || self.nu < 0.0 {
            return Err(Error::Config(format!(
                "mu and nu must be ≥ 0, got mu = {}, nu = {}",
                self.mu, self.nu
            )));
        }
        if self.p <= 1.0 {
            return Err(Error::Config(format!("p must be > 1, got {}", self.p)));
        }
        if self.epsilon < 0.0 {
            return Err(Error::Config(format!(
                "epsilon must be ≥ 0, got {}",
                self.epsilon
            )));
        }
        if self.support_radius <= 0.0 {
            return Err(Error::Config(format!(
                "M must be > 0, got {}",
                self.support_radius
            )));
        }
        Ok(())
    }

    /// Solver and test-function workflows need `δ > 0`.
    pub fn require_positive_delta(&self) -> Result<f64> {
        let delta = self.delta();
        if delta > 0.0 {
            Ok(delta)
        } else {
            Err(Error::domain(format!(
                "δ = (μ−1)² − 4ν² must be > 0, got {delta}"
            )))
        }
    }
}

/// `δ = (μ − 1)² − 4ν²`.
pub fn delta_of(mu: f64, nu: f64) -> f64 {
    (mu - 1.0).powi(2) - 4.0 * nu * nu
}

/// Characteristic radius `φ(t) = t^{m+1}/(m+1)` of the degenerate light cone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicSpeed {
    pub m: f64,
}

impl CharacteristicSpeed {
    pub fn phi(&self, t: f64) -> f64 {
        t.powf(self.m + 1.0) / (self.m + 1.0)
    }

    /// Time at which the characteristic radius equals `radius`.
    pub fn phi_inverse(&self, radius: f64) -> f64 {
        ((self.m + 1.0) * radius).powf(1.0 / (self.m + 1.0))
    }

    /// Radius of the support of a solution started from data in the ball of
    /// radius `initial_radius` at `t = 1`.
    pub fn support_bound(&self, t: f64, initial_radius: f64) -> f64 {
        self.phi(t) - self.phi(1.0) + initial_radius
    }
}

/// Positive root of `a p² − b p − k = 0` for `a > 0`, `k > 0`, written so that
/// neither sign of `b` cancels.
fn positive_quadratic_root(a: f64, b: f64, k: f64) -> f64 {
    let s = (b * b + 4.0 * a * k).sqrt();
    if b >= 0.0 {
        (b + s) / (2.0 * a)
    } else {
        2.0 * k / (s - b)
    }
}

/// Coefficients `(A, B, K)` of `A p² − B p − K = 0` whose positive root is
/// `p_S(n + μ/(m+1), m)`.
pub fn strauss_polynomial(n: u32, m: f64, mu: f64) -> (f64, f64, f64) {
    let k = m + 1.0;
    let n = f64::from(n);
    (k * n - 1.0 + mu, k * (n - 2.0) + 3.0 + mu, 2.0 * k)
}

/// Strauss exponent `p_S(n + μ/(m+1), m)`.
pub fn strauss_exponent(n: u32, m: f64, mu: f64) -> Result<f64> {
    let (a, b, k) = strauss_polynomial(n, m, mu);
    if !(a > 0.0) {
        return Err(Error::domain(format!(
            "leading coefficient (m+1)n − 1 + μ = {a} must be positive"
        )));
    }
    Ok(positive_quadratic_root(a, b, k))
}

/// Like [`strauss_exponent`] but `+∞` when the leading coefficient vanishes
/// (for instance `p_S(1) = ∞`).
pub fn strauss_exponent_or_inf(n: u32, m: f64, mu: f64) -> f64 {
    strauss_exponent(n, m, mu).unwrap_or(f64::INFINITY)
}

/// Fujita exponent `p_F(shift) = 1 + 2/shift`.
pub fn fujita_exponent(shift: f64) -> Result<f64> {
    if shift > 0.0 {
        Ok(1.0 + 2.0 / shift)
    } else {
        Err(Error::domain(format!("Fujita shift must be > 0, got {shift}")))
    }
}

/// Argument `(m+1)n + (μ − 1 − √δ)/2` of the Fujita exponent. Needs `δ ≥ 0`.
pub fn fujita_shift(params: &ModelParams) -> Result<f64> {
    let delta = params.delta();
    if delta < 0.0 {
        return Err(Error::domain(format!("δ must be ≥ 0, got {delta}")));
    }
    Ok((params.m + 1.0) * params.dim() + (params.mu - 1.0 - delta.sqrt()) / 2.0)
}

/// `β_q = ((m+1)n − μ + 1)/2 − (m+1)/q` for `q > 1`.
pub fn beta_q(q: f64, params: &ModelParams) -> f64 {
    let k = params.m + 1.0;
    (k * params.dim() - params.mu + 1.0) / 2.0 - k / q
}

/// `((1+√δ−μ)/2, ((m+1)n−μ+1)/2) ∩ [1−μ, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaInterval {
    pub lower: f64,
    /// The lower end is `1 − μ` and included.
    pub lower_closed: bool,
    /// Always excluded.
    pub upper: f64,
    /// Left end of the open interval before intersecting with `[1−μ, ∞)`.
    pub cone_lower: f64,
}

impl BetaInterval {
    pub fn is_empty(&self) -> bool {
        self.lower >= self.upper
    }

    pub fn contains(&self, beta: f64) -> bool {
        let above = if self.lower_closed {
            beta >= self.lower
        } else {
            beta > self.lower
        };
        above && beta < self.upper
    }

    /// Membership in the open interval alone, without the `[1−μ, ∞)` cut.
    pub fn cone_contains(&self, beta: f64) -> bool {
        beta > self.cone_lower && beta < self.upper
    }

    pub fn midpoint(&self) -> Option<f64> {
        (!self.is_empty()).then_some(0.5 * (self.lower + self.upper))
    }

    /// Point at fraction `s ∈ (0,1)` of the way from the lower to the upper end.
    pub fn interpolate(&self, s: f64) -> Option<f64> {
        (!self.is_empty()).then_some(self.lower + s * (self.upper - self.lower))
    }
}

pub fn admissible_beta_interval(params: &ModelParams) -> Result<BetaInterval> {
    let delta = params.delta();
    if delta < 0.0 {
        return Err(Error::domain(format!("δ must be ≥ 0, got {delta}")));
    }
    let cone_lower = (1.0 + delta.sqrt() - params.mu) / 2.0;
    let upper = ((params.m + 1.0) * params.dim() - params.mu + 1.0) / 2.0;
    let floor = 1.0 - params.mu;
    let (lower, lower_closed) = if floor > cone_lower {
        (floor, true)
    } else {
        (cone_lower, false)
    };
    Ok(BetaInterval {
        lower,
        lower_closed,
        upper,
        cone_lower,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaClass {
    /// `δ < (m+1)²n²`
    SubWave,
    /// `δ ≥ (m+1)²(n+1)²`
    ParabolicLike,
    Intermediate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dominance {
    Strauss,
    Fujita,
    Equal,
}

fn dominance(p_strauss: f64, p_fujita: f64) -> Dominance {
    if (p_strauss.is_infinite() && p_fujita.is_infinite()) || (p_strauss - p_fujita).abs() <= EXPONENT_TIE_TOL {
        Dominance::Equal
    } else if p_strauss > p_fujita {
        Dominance::Strauss
    } else {
        Dominance::Fujita
    }
}

/// Outcome of checking the lifespan theorem's hypotheses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeReport {
    pub delta: f64,
    pub delta_class: DeltaClass,
    pub p_strauss: f64,
    pub p_fujita: f64,
    pub dominant_exponent: Dominance,
    pub delta_positive: bool,
    pub delta_below_wave_bound: bool,
    /// `p_S > 2(m+1)/((m+1)n − √δ)`, evaluated at the critical power.
    pub strauss_above_lower_bound: bool,
    /// `n = 1 ⇒ μ ≥ m`.
    pub low_dimension_ok: bool,
    /// `M < 1/(m+1)`.
    pub support_ok: bool,
    /// Local existence range `1 < p ≤ n/(n−2)` for `n ≥ 3`, evaluated at `p`.
    pub gagliardo_nirenberg_ok: bool,
    pub admissible: bool,
    pub reasons: Vec<String>,
}

pub fn check_theorem2_hypotheses(params: &ModelParams) -> RegimeReport {
    let k = params.m + 1.0;
    let n = params.dim();
    let delta = params.delta();
    let sqrt_delta = delta.max(0.0).sqrt();
    let mut reasons = Vec::new();

    let delta_class = if delta < (k * n).powi(2) {
        DeltaClass::SubWave
    } else if delta >= (k * (n + 1.0)).powi(2) {
        DeltaClass::ParabolicLike
    } else {
        DeltaClass::Intermediate
    };

    let p_strauss = strauss_exponent_or_inf(params.n, params.m, params.mu);
    let p_fujita = fujita_shift(params)
        .and_then(fujita_exponent)
        .unwrap_or(f64::INFINITY);

    let delta_positive = delta > 0.0;
    if !delta_positive {
        reasons.push(format!("δ = {delta} is not positive"));
    }
    let delta_below_wave_bound = delta < (k * n).powi(2);
    if !delta_below_wave_bound {
        reasons.push(format!("δ = {delta} ≥ (m+1)²n² = {}", (k * n).powi(2)));
    }
    let denom = k * n - sqrt_delta;
    let strauss_above_lower_bound = denom > 0.0 && p_strauss > 2.0 * k / denom;
    if !strauss_above_lower_bound {
        reasons.push("p_S ≤ 2(m+1)/((m+1)n − √δ)".to_string());
    }
    let low_dimension_ok = params.n != 1 || params.mu >= params.m;
    if !low_dimension_ok {
        reasons.push("n=1 requires μ≥m".to_string());
    }
    let support_ok = params.support_radius > 0.0 && params.support_radius < 1.0 / k;
    if !support_ok {
        reasons.push(format!(
            "M = {} must lie in (0, 1/(m+1))",
            params.support_radius
        ));
    }
    let gagliardo_nirenberg_ok = params.p > 1.0
        && (params.n <= 2 || params.p <= n / (n - 2.0) + EXPONENT_TIE_TOL);
    if !gagliardo_nirenberg_ok {
        reasons.push(format!(
            "p = {} violates the Gagliardo–Nirenberg range 1 < p ≤ n/(n−2)",
            params.p
        ));
    }

    let admissible = delta_positive
        && delta_below_wave_bound
        && strauss_above_lower_bound
        && low_dimension_ok
        && support_ok
        && gagliardo_nirenberg_ok;

    RegimeReport {
        delta,
        delta_class,
        p_strauss,
        p_fujita,
        dominant_exponent: dominance(p_strauss, p_fujita),
        delta_positive,
        delta_below_wave_bound,
        strauss_above_lower_bound,
        low_dimension_ok,
        support_ok,
        gagliardo_nirenberg_ok,
        admissible,
        reasons,
    }
}

/// Positive root `a(m)` of
/// `η² − [8(m+1)³ − 8(m+1)² + 2(m+1) − 1]η + 8(m+1) − 8(m+1)² − 2 = 0`.
pub fn comparison_root(m: f64) -> Result<f64> {
    let k = m + 1.0;
    let b = 8.0 * k.powi(3) - 8.0 * k * k + 2.0 * k - 1.0;
    let c = 8.0 * k - 8.0 * k * k - 2.0;
    let disc = b * b - 4.0 * c;
    if disc < 0.0 {
        return Err(Error::domain(format!("no real root for m = {m}")));
    }
    let s = disc.sqrt();
    // b > 0 for m ≥ 0, so the larger root has no cancellation.
    let (larger, smaller) = if b >= 0.0 {
        ((b + s) / 2.0, 2.0 * c / (b + s))
    } else {
        (2.0 * c / (b - s), (b - s) / 2.0)
    };
    if !(larger > 0.0 && smaller < 0.0) {
        return Err(Error::domain(format!(
            "expected one positive and one negative root, got {larger} and {smaller}"
        )));
    }
    Ok(larger)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Delta1Comparison {
    pub p_strauss: f64,
    pub p_fujita: f64,
    pub larger: Dominance,
    /// Only for `n = 2`.
    pub comparison_root: Option<f64>,
}

/// Which of `p_S(n+μ/(m+1), m)` and `p_F((m+1)n + (μ−2)/2)` is larger when
/// `δ = 1`.
pub fn compare_ps_pf_delta1(n: u32, m: f64, mu: f64) -> Result<Delta1Comparison> {
    let p_strauss = strauss_exponent_or_inf(n, m, mu);
    let shift = (m + 1.0) * f64::from(n) + (mu - 2.0) / 2.0;
    let p_fujita = fujita_exponent(shift).unwrap_or(f64::INFINITY);
    let comparison_root = if n == 2 {
        Some(comparison_root(m)?)
    } else {
        None
    };
    Ok(Delta1Comparison {
        p_strauss,
        p_fujita,
        larger: dominance(p_strauss, p_fujita),
        comparison_root,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayCase {
    /// `k` above the threshold: `t^{−(μ+m)/2}`.
    AboveThreshold,
    /// `k` at the threshold: `t^{−(μ+m)/2}(1 + log t)^{1/2}`.
    AtThreshold,
    /// `k` below the threshold: `t^{−(m+1)(k+n/2) + (√δ−μ+1)/2}`.
    BelowThreshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayPrediction {
    pub case: DecayCase,
    pub threshold: f64,
    pub time_exponent: f64,
    pub has_log_factor: bool,
}

/// Predicted time decay of the `Ḣ^k` norm of solutions to the linear equation.
pub fn predicted_linear_decay(k: f64, params: &ModelParams) -> Result<DecayPrediction> {
    let delta = params.require_positive_delta()?;
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::domain(format!("k must lie in [0,1], got {k}")));
    }
    let mp1 = params.m + 1.0;
    let n = params.dim();
    let sqrt_delta = delta.sqrt();
    let threshold = sqrt_delta / (2.0 * mp1) + 0.5 - n / 2.0;
    let slow = -(params.mu + params.m) / 2.0;
    let pred = if (k - threshold).abs() <= EXPONENT_TIE_TOL {
        DecayPrediction {
            case: DecayCase::AtThreshold,
            threshold,
            time_exponent: slow,
            has_log_factor: true,
        }
    } else if k > threshold {
        DecayPrediction {
            case: DecayCase::AboveThreshold,
            threshold,
            time_exponent: slow,
            has_log_factor: false,
        }
    } else {
        DecayPrediction {
            case: DecayCase::BelowThreshold,
            threshold,
            time_exponent: -mp1 * (k + n / 2.0) + (sqrt_delta - params.mu + 1.0) / 2.0,
            has_log_factor: false,
        }
    };
    Ok(pred)
}

/// Gagliardo–Nirenberg interpolation exponent `θ(2p) = n(p−1)/(2p)` and
/// whether it lies in `[0, 1]`.
pub fn gn_theta(p: f64, n: u32) -> (f64, bool) {
    let theta = f64::from(n) * (p - 1.0) / (2.0 * p);
    (theta, (0.0..=1.0).contains(&theta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic_roots(a: f64, b: f64, c: f64) -> (f64, f64) {
        // plain textbook formula, as an independent oracle
        let d = (b * b - 4.0 * a * c).sqrt();
        ((-b + d) / (2.0 * a), (-b - d) / (2.0 * a))
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_of(3.0, 0.5), 3.0);
        assert_eq!(delta_of(2.0, 0.0), 1.0);
        assert_eq!(delta_of(1.0, 0.0), 0.0);
    }

    #[test]
    fn strauss_examples() {
        let (r, _) = quadratic_roots(2.0, -4.0, -2.0);
        assert!((strauss_exponent(3, 0.0, 0.0).unwrap() - r).abs() < 1e-14);
        assert!((r - (1.0 + 2f64.sqrt())).abs() < 1e-14);

        let (r, _) = quadratic_roots(4.0, -6.0, -2.0);
        assert!((strauss_exponent(3, 0.0, 2.0).unwrap() - r).abs() < 1e-14);
        assert!((r - 1.780776).abs() < 1e-6);
    }

    #[test]
    fn strauss_without_damping_is_tricomi_root() {
        for n in 2..7u32 {
            for &m in &[0.0, 0.5, 1.0, 3.0] {
                let nf = f64::from(n);
                let a = (m + 1.0) * nf - 1.0;
                let b = (m + 1.0) * (nf - 2.0) + 3.0;
                let (r, _) = quadratic_roots(a, -b, -2.0 * (m + 1.0));
                let p = strauss_exponent(n, m, 0.0).unwrap();
                assert!((p - r).abs() < 1e-12, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn strauss_needs_positive_leading_coefficient() {
        assert!(matches!(strauss_exponent(1, 0.0, 0.0), Err(Error::Domain(_))));
        assert!(strauss_exponent_or_inf(1, 0.0, 0.0).is_infinite());
    }

    #[test]
    fn strauss_large_damping_has_no_cancellation() {
        // B ≫ K: the naive formula would lose digits through cancellation.
        let p = strauss_exponent(2, 0.0, 1e8).unwrap();
        let (a, b, k) = strauss_polynomial(2, 0.0, 1e8);
        let res = a * p * p - b * p - k;
        assert!(res.abs() <= 1e-10 * (a * p * p).max(b * p));
        assert!(p > 1.0);
    }

    #[test]
    fn fujita_examples() {
        assert_eq!(fujita_exponent(2.0).unwrap(), 2.0);
        assert_eq!(fujita_exponent(4.0).unwrap(), 1.5);
        assert!(fujita_exponent(0.0).is_err());
        let params = ModelParams::new(0.0, 2, 2.0, 0.0, 2.0);
        let shift = fujita_shift(&params).unwrap();
        assert_eq!(shift, 2.0 + (2.0 - 1.0 - 1.0) / 2.0);
        assert_eq!(fujita_exponent(shift).unwrap(), 2.0);
    }

    #[test]
    fn beta_q_examples() {
        let p = ModelParams::new(0.0, 3, 0.0, 0.0, 2.0);
        assert!((beta_q(2.0, &p) - 1.5).abs() < 1e-15);
        assert!((beta_q(1e15, &p) - 2.0).abs() < 1e-12);
        let p = ModelParams::new(0.0, 1, 1.0, 0.0, 2.0);
        assert!(beta_q(2.0, &p).abs() < 1e-15);
    }

    #[test]
    fn beta_interval_examples() {
        let iv = admissible_beta_interval(&ModelParams::new(0.0, 3, 2.0, 0.0, 2.0)).unwrap();
        assert_eq!((iv.lower, iv.upper, iv.lower_closed), (0.0, 1.0, false));
        assert!(!iv.is_empty());

        let iv = admissible_beta_interval(&ModelParams::new(0.0, 3, 0.0, 0.0, 2.0)).unwrap();
        assert_eq!((iv.lower, iv.upper), (1.0, 2.0));
        assert!(!iv.contains(1.0));
        assert!(iv.contains(1.5));

        // δ = 16 ≥ (m+1)²n² = 9
        let iv = admissible_beta_interval(&ModelParams::new(0.0, 3, 5.0, 0.0, 2.0)).unwrap();
        assert!(iv.is_empty());
        assert!(iv.midpoint().is_none());
    }

    #[test]
    fn remark_parameters_are_admissible() {
        for &m in &[0.0, 0.5, 1.0, 2.0, 5.0] {
            let mut params = ModelParams::new(m, 3, 3.0, 0.5, 2.0);
            params.p = strauss_exponent(3, m, 3.0).unwrap();
            let report = check_theorem2_hypotheses(&params);
            assert_eq!(report.delta, 3.0);
            assert!(report.admissible, "m={m}: {:?}", report.reasons);
        }
    }

    #[test]
    fn low_dimension_needs_mu_at_least_m() {
        let params = ModelParams::new(1.0, 1, 0.5, 0.0, 2.0);
        let report = check_theorem2_hypotheses(&params);
        assert!(!report.admissible);
        assert!(report.reasons.iter().any(|r| r == "n=1 requires μ≥m"));
    }

    #[test]
    fn gn_range_violation_is_reported() {
        let params = ModelParams::new(0.0, 4, 3.0, 0.5, 3.0);
        let report = check_theorem2_hypotheses(&params);
        assert!(!report.gagliardo_nirenberg_ok);
        assert!(!report.admissible);
    }

    #[test]
    fn delta_classes() {
        let sub = check_theorem2_hypotheses(&ModelParams::new(0.0, 3, 3.0, 0.5, 2.0));
        assert_eq!(sub.delta_class, DeltaClass::SubWave);
        // δ = 36 ≥ (n+1)² = 16
        let para = check_theorem2_hypotheses(&ModelParams::new(0.0, 3, 7.0, 0.0, 2.0));
        assert_eq!(para.delta_class, DeltaClass::ParabolicLike);
        // δ = 9 = n²
        let mid = check_theorem2_hypotheses(&ModelParams::new(0.0, 3, 4.0, 0.0, 2.0));
        assert_eq!(mid.delta_class, DeltaClass::Intermediate);
    }

    #[test]
    fn comparison_root_at_m0_is_two() {
        // η² − η − 2 = (η − 2)(η + 1)
        assert!((comparison_root(0.0).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn delta1_comparison_examples() {
        for &m in &[0.0, 0.3, 1.0, 4.0] {
            for &mu in &[0.0, 0.5, 2.0, 10.0] {
                let c = compare_ps_pf_delta1(3, m, mu).unwrap();
                assert_eq!(c.larger, Dominance::Strauss, "m={m} mu={mu}");
            }
        }
        let c = compare_ps_pf_delta1(2, 0.0, 0.0).unwrap();
        assert_eq!(c.larger, Dominance::Strauss);
        assert!((c.p_fujita - 3.0).abs() < 1e-15);
        let a = c.comparison_root.unwrap();
        let above = compare_ps_pf_delta1(2, 0.0, a + 1e-3).unwrap();
        assert_eq!(above.larger, Dominance::Fujita);
    }

    #[test]
    fn decay_cases() {
        let params = ModelParams::new(0.0, 1, 4.0, 0.0, 2.0);
        let pred = predicted_linear_decay(0.0, &params).unwrap();
        assert_eq!(pred.case, DecayCase::BelowThreshold);
        assert!((pred.time_exponent + 0.5).abs() < 1e-15);
        assert!(!pred.has_log_factor);

        // threshold for m=0, n=3, μ=2, ν=0 (δ=1): 1/2 + 1/2 − 3/2 < 0
        let params = ModelParams::new(0.0, 3, 2.0, 0.0, 2.0);
        let pred = predicted_linear_decay(0.5, &params).unwrap();
        assert_eq!(pred.case, DecayCase::AboveThreshold);
        assert_eq!(pred.time_exponent, -1.0);

        // m=0, n=2, μ=3, ν=0: δ=4, threshold = 1 + 1/2 − 1 = 1/2
        let params = ModelParams::new(0.0, 2, 3.0, 0.0, 2.0);
        let pred = predicted_linear_decay(0.5, &params).unwrap();
        assert_eq!(pred.case, DecayCase::AtThreshold);
        assert!(pred.has_log_factor);
        assert_eq!(pred.time_exponent, -1.5);
    }

    #[test]
    fn gn_theta_examples() {
        assert_eq!(gn_theta(2.0, 2), (0.5, true));
        assert!(gn_theta(1.0 + 1e-12, 3).0 < 1e-11);
        let (theta, ok) = gn_theta(3.0, 4);
        assert!((theta - 4.0 / 3.0).abs() < 1e-15);
        assert!(!ok);
    }

    #[test]
    fn characteristic_speed() {
        let s = CharacteristicSpeed { m: 2.0 };
        assert!((s.phi(1.0) - 1.0 / 3.0).abs() < 1e-16);
        assert!((s.phi_inverse(s.phi(2.7)) - 2.7).abs() < 1e-14);
        assert!(s.phi(1.5) > s.phi(1.4));
    }
}
