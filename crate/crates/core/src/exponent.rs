//! Variable exponents `alpha(t)` and their admissibility checks.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::fem1d::TriDiagonalMatrix;

/// Scalar function of time shared across threads.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Magnitude below which `alpha'(0)` and `alpha''(0)` count as zero.
pub const ZERO_THRESHOLD: f64 = 1e-10;

/// Relative tolerance of the finite-difference derivative cross-check.
pub const DERIVATIVE_RTOL: f64 = 1e-6;

const FD_STEP: f64 = 1e-7;

/// Small-time behaviour of the exponent, which fixes how singular the
/// memory kernel is at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseClass {
    /// `alpha'(0) != 0`: kernel grows like `|ln t|`.
    Case1,
    /// `alpha'(0) = 0`, `alpha''(0) != 0`: bounded kernel.
    Case2,
    /// `alpha'(0) = alpha''(0) = 0`: bounded kernel with bounded derivative.
    Case3,
    Unclassified,
}

impl fmt::Display for CaseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseClass::Case1 => "case1",
            CaseClass::Case2 => "case2",
            CaseClass::Case3 => "case3",
            CaseClass::Unclassified => "unclassified",
        };
        f.write_str(s)
    }
}

/// Time-dependent exponent with its first two derivatives and the bounds
/// `alpha*` (sup of alpha) and `Q*` (sup of |alpha'|, |alpha''|) on `[0, T]`.
#[derive(Clone)]
pub struct VariableExponent {
    name: String,
    alpha: ScalarFn,
    alpha_d1: ScalarFn,
    alpha_d2: ScalarFn,
    alpha_star: f64,
    deriv_bound: f64,
}

impl fmt::Debug for VariableExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VariableExponent")
            .field("name", &self.name)
            .field("alpha_star", &self.alpha_star)
            .field("deriv_bound", &self.deriv_bound)
            .finish()
    }
}

impl VariableExponent {
    pub fn new(
        name: impl Into<String>,
        alpha: ScalarFn,
        alpha_d1: ScalarFn,
        alpha_d2: ScalarFn,
        alpha_star: f64,
        deriv_bound: f64,
    ) -> Self {
        Self {
            name: name.into(),
            alpha,
            alpha_d1,
            alpha_d2,
            alpha_star,
            deriv_bound,
        }
    }

    /// `alpha ≡ 0`; the model reduces to the heat equation.
    pub fn zero() -> Self {
        let z: ScalarFn = Arc::new(|_| 0.0);
        Self::new("zero", z.clone(), z.clone(), z, 0.0, 0.0)
    }

    /// `alpha(t) = 1 - exp(-t)` on `[0, t_final]`.
    pub fn one_minus_exp(t_final: f64) -> Self {
        Self::new(
            "exp-example1",
            Arc::new(|t: f64| -(-t).exp_m1()),
            Arc::new(|t: f64| (-t).exp()),
            Arc::new(|t: f64| -(-t).exp()),
            -(-t_final).exp_m1(),
            1.0,
        )
    }

    /// `alpha(t) = sin(t)`, admissible for `t_final < pi/2`.
    pub fn sine(t_final: f64) -> Self {
        Self::new(
            "exp-example2",
            Arc::new(f64::sin),
            Arc::new(f64::cos),
            Arc::new(|t: f64| -t.sin()),
            t_final.min(PI / 2.0).sin(),
            1.0,
        )
    }

    /// Smooth monotone transition from `alpha(0) = 0` to `alpha(T) = alpha_end`:
    /// `alpha(t) = alpha_end * (t/T + sin(2 pi (1 - t/T)) / (2 pi))`.
    pub fn smooth_transition(t_final: f64, alpha_end: f64) -> Self {
        let (tf, ae) = (t_final, alpha_end);
        let alpha = move |t: f64| {
            let s = 1.0 - t / tf;
            ae + (0.0 - ae) * (s - (2.0 * PI * s).sin() / (2.0 * PI))
        };
        let d1 = move |t: f64| ae * (1.0 - (2.0 * PI * (1.0 - t / tf)).cos()) / tf;
        let d2 = move |t: f64| -ae * 2.0 * PI * (2.0 * PI * (1.0 - t / tf)).sin() / (tf * tf);
        Self::new(
            "exp-figure1",
            Arc::new(alpha),
            Arc::new(d1),
            Arc::new(d2),
            ae,
            (2.0 * ae / tf).max(2.0 * PI * ae / (tf * tf)),
        )
    }

    /// Natural cubic spline through `(t, alpha)` samples; the first sample must
    /// be `(0, 0)`. Bounds are taken from a dense sampling of the spline.
    pub fn from_table(samples: &[(f64, f64)]) -> Result<Self> {
        let spline = Arc::new(CubicSpline::natural(samples)?);
        let (t0, _) = spline.domain();
        if t0 != 0.0 {
            return Err(invalid("exponent table must start at t = 0"));
        }
        let mut alpha_star = 0.0f64;
        let mut deriv_bound = 0.0f64;
        for w in samples.windows(2) {
            for i in 0..=64 {
                let t = w[0].0 + (w[1].0 - w[0].0) * i as f64 / 64.0;
                alpha_star = alpha_star.max(spline.eval(t));
                deriv_bound = deriv_bound.max(spline.d1(t).abs()).max(spline.d2(t).abs());
            }
        }
        // sampled maxima of smooth pieces; leave room for extrema between samples
        alpha_star *= 1.0 + 1e-3;
        deriv_bound *= 1.0 + 1e-3;
        let (s0, s1, s2) = (spline.clone(), spline.clone(), spline);
        Ok(Self::new(
            "table",
            Arc::new(move |t| s0.eval(t)),
            Arc::new(move |t| s1.d1(t)),
            Arc::new(move |t| s2.d2(t)),
            alpha_star,
            deriv_bound,
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn alpha(&self, t: f64) -> f64 {
        (self.alpha)(t)
    }

    #[inline]
    pub fn alpha_d1(&self, t: f64) -> f64 {
        (self.alpha_d1)(t)
    }

    #[inline]
    pub fn alpha_d2(&self, t: f64) -> f64 {
        (self.alpha_d2)(t)
    }

    pub fn alpha_star(&self) -> f64 {
        self.alpha_star
    }

    pub fn deriv_bound(&self) -> f64 {
        self.deriv_bound
    }

    pub fn case_class(&self) -> CaseClass {
        let d1 = self.alpha_d1(0.0);
        let d2 = self.alpha_d2(0.0);
        if !d1.is_finite() || !d2.is_finite() {
            CaseClass::Unclassified
        } else if d1.abs() >= ZERO_THRESHOLD {
            CaseClass::Case1
        } else if d2.abs() >= ZERO_THRESHOLD {
            CaseClass::Case2
        } else {
            CaseClass::Case3
        }
    }

    /// `alpha(t) / t`, replaced by its limit `alpha'(0)` for `t < 1e-12`.
    pub fn alpha_over_t(&self, t: f64) -> f64 {
        if t < 1e-12 {
            self.alpha_d1(0.0)
        } else {
            (self.alpha(t) - self.alpha(0.0)) / t
        }
    }
}

/// Outcome of checking the admissibility clauses on a sample grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub starts_at_zero: bool,
    pub within_bounds: bool,
    pub alpha_star_below_one: bool,
    pub derivatives_bounded: bool,
    pub derivatives_consistent: bool,
    /// Largest relative mismatch between supplied and finite-difference derivatives.
    pub max_derivative_mismatch: f64,
    pub case_class: CaseClass,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.starts_at_zero
            && self.within_bounds
            && self.alpha_star_below_one
            && self.derivatives_bounded
            && self.derivatives_consistent
    }
}

/// Evaluates every admissibility clause on `n_samples` uniform points of `[0, T]`
/// without failing on violations.
pub fn assess_assumption_a(exp: &VariableExponent, t_final: f64, n_samples: usize) -> Result<ValidationReport> {
    if !(t_final > 0.0) || !t_final.is_finite() {
        return Err(invalid(format!("final time must be positive, got {t_final}")));
    }
    if n_samples < 2 {
        return Err(invalid("need at least two validation samples"));
    }
    let tol = 1e-12;
    let starts_at_zero = exp.alpha(0.0).abs() <= 1e-14;
    let alpha_star_below_one = exp.alpha_star() < 1.0;
    let mut within_bounds = true;
    let mut derivatives_bounded = true;
    let mut max_mismatch = 0.0f64;

    let h = FD_STEP * t_final.min(1.0);
    for i in 0..n_samples {
        let t = t_final * i as f64 / (n_samples - 1) as f64;
        let a = exp.alpha(t);
        if !(a >= -tol && a <= exp.alpha_star() + tol) {
            within_bounds = false;
        }
        let (d1, d2) = (exp.alpha_d1(t), exp.alpha_d2(t));
        let cap = exp.deriv_bound() * (1.0 + tol) + tol;
        if !(d1.abs() <= cap && d2.abs() <= cap) {
            derivatives_bounded = false;
        }
        // Keep the stencil inside [0, T].
        let tc = t.clamp(h, t_final - h);
        let fd1 = (exp.alpha(tc + h) - exp.alpha(tc - h)) / (2.0 * h);
        let fd2 = (exp.alpha_d1(tc + h) - exp.alpha_d1(tc - h)) / (2.0 * h);
        let m1 = (fd1 - exp.alpha_d1(tc)).abs() / exp.alpha_d1(tc).abs().max(1.0);
        let m2 = (fd2 - exp.alpha_d2(tc)).abs() / exp.alpha_d2(tc).abs().max(1.0);
        max_mismatch = max_mismatch.max(if m1.is_nan() { f64::INFINITY } else { m1 });
        max_mismatch = max_mismatch.max(if m2.is_nan() { f64::INFINITY } else { m2 });
    }

    Ok(ValidationReport {
        starts_at_zero,
        within_bounds,
        alpha_star_below_one,
        derivatives_bounded,
        derivatives_consistent: max_mismatch <= DERIVATIVE_RTOL,
        max_derivative_mismatch: max_mismatch,
        case_class: exp.case_class(),
    })
}

/// Like [`assess_assumption_a`] but fails on the first violated clause.
pub fn validate_assumption_a(exp: &VariableExponent, t_final: f64, n_samples: usize) -> Result<ValidationReport> {
    let report = assess_assumption_a(exp, t_final, n_samples)?;
    if !report.starts_at_zero {
        return Err(Error::Assumption(format!("alpha(0) = {} is not zero", exp.alpha(0.0))));
    }
    if !report.alpha_star_below_one {
        return Err(Error::Assumption(format!(
            "alpha* = {} is not below one",
            exp.alpha_star()
        )));
    }
    if !report.within_bounds {
        return Err(Error::Assumption(format!(
            "alpha leaves [0, {}] on [0, {t_final}]",
            exp.alpha_star()
        )));
    }
    if !report.derivatives_bounded {
        return Err(Error::Assumption(format!(
            "derivatives exceed the bound {} on [0, {t_final}]",
            exp.deriv_bound()
        )));
    }
    if !report.derivatives_consistent {
        return Err(Error::Assumption(format!(
            "supplied derivatives disagree with finite differences (relative mismatch {:.3e})",
            report.max_derivative_mismatch
        )));
    }
    Ok(report)
}

/// Natural cubic spline on strictly increasing knots.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    // second derivatives at the knots
    moments: Vec<f64>,
}

impl CubicSpline {
    pub fn natural(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 3 {
            return Err(invalid("spline needs at least three samples"));
        }
        if samples.iter().any(|(t, a)| !t.is_finite() || !a.is_finite()) {
            return Err(invalid("spline samples must be finite"));
        }
        if samples.windows(2).any(|w| !(w[0].0 < w[1].0)) {
            return Err(invalid("spline knots must be strictly increasing"));
        }
        let knots: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let values: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let n = knots.len();
        let widths: Vec<f64> = knots.windows(2).map(|w| w[1] - w[0]).collect();
        // Interior moment equations; natural ends fix the boundary moments at zero.
        let inner = n - 2;
        let mut sub = Vec::with_capacity(inner.saturating_sub(1));
        let mut diag = Vec::with_capacity(inner);
        let mut sup = Vec::with_capacity(inner.saturating_sub(1));
        let mut rhs = Vec::with_capacity(inner);
        for i in 1..n - 1 {
            diag.push((widths[i - 1] + widths[i]) / 3.0);
            if i + 1 < n - 1 {
                sup.push(widths[i] / 6.0);
                sub.push(widths[i] / 6.0);
            }
            rhs.push((values[i + 1] - values[i]) / widths[i] - (values[i] - values[i - 1]) / widths[i - 1]);
        }
        let mat = TriDiagonalMatrix::new(sub, diag, sup)?;
        let inner_moments = mat.solve(&rhs)?;
        let mut moments = vec![0.0; n];
        moments[1..n - 1].copy_from_slice(&inner_moments);
        Ok(Self { knots, values, moments })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    fn locate(&self, t: f64) -> usize {
        let last = self.knots.len() - 2;
        match self.knots.binary_search_by(|k| k.total_cmp(&t)) {
            Ok(i) => i.min(last),
            Err(i) => i.saturating_sub(1).min(last),
        }
    }

    fn piece(&self, t: f64) -> (f64, f64, f64, usize) {
        let i = self.locate(t);
        let h = self.knots[i + 1] - self.knots[i];
        let a = (self.knots[i + 1] - t) / h;
        let b = (t - self.knots[i]) / h;
        (a, b, h, i)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let (a, b, h, i) = self.piece(t);
        let (m0, m1) = (self.moments[i], self.moments[i + 1]);
        a * self.values[i] + b * self.values[i + 1] + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0
    }

    pub fn d1(&self, t: f64) -> f64 {
        let (a, b, h, i) = self.piece(t);
        let (m0, m1) = (self.moments[i], self.moments[i + 1]);
        (self.values[i + 1] - self.values[i]) / h - (3.0 * a * a - 1.0) * h * m0 / 6.0
            + (3.0 * b * b - 1.0) * h * m1 / 6.0
    }

    pub fn d2(&self, t: f64) -> f64 {
        let (a, b, _, i) = self.piece(t);
        a * self.moments[i] + b * self.moments[i + 1]
    }
}
