//! Memory weights `b[n][k]` of the discrete convolution `sum_k b[n][k] ΔU_k`.
//!
//! On panel `[t_{k-1}, t_k]` the exponent and its derivative are frozen at the
//! lag `t_n - t_k`, while `ln(t_n - s)` is integrated exactly:
//!
//! ```text
//! b[n][k] = (-alpha'(d) * b1[n][k] + R[n][k] * b2[n][k]) / Gamma(1 - alpha(d)),   d = t_n - t_k
//! b1[n][k] = ∫ ln(t_n - s) (t_n - s)^(-alpha(d)) ds
//! b2[n][k] = ∫ (t_n - s)^(-alpha(d)) ds
//! R[n][k]  = -alpha(d)/d + psi(1 - alpha(d)) alpha'(d)
//! ```
//!
//! For `k = n` the lag is zero, `alpha(0) = 0`, and the removable singularities
//! resolve to `b1 = tau (ln tau - 1)` and `R = -alpha'(0) (1 + euler_gamma)`.
//!
//! On the uniform grid every quantity depends on `(n, k)` only through the lag
//! index `n - k`, so the table is stored as one value per lag.

use crate::error::{invalid, Error, Result};
use crate::exponent::VariableExponent;
use crate::quadrature::{integrate, QuadOptions};
use crate::special::{digamma, gamma, EULER_GAMMA};

fn check_indices(n: usize, k: usize, tau: f64) -> Result<()> {
    if k < 1 || k > n {
        return Err(invalid(format!("weight index needs 1 <= k <= n, got n = {n}, k = {k}")));
    }
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(invalid(format!("time step must be positive, got {tau}")));
    }
    Ok(())
}

// Panel geometry for lag j = n - k: near = t_n - t_k, far = t_n - t_{k-1}.
struct Lag {
    j: usize,
    near: f64,
    far: f64,
    a: f64,
}

impl Lag {
    fn new(j: usize, tau: f64, exp: &VariableExponent) -> Self {
        let near = j as f64 * tau;
        let a = if j == 0 { exp.alpha(0.0) } else { exp.alpha(near) };
        Self {
            j,
            near,
            far: near + tau,
            a,
        }
    }

    /// `far^c - near^c` with `c = 1 - a`, free of cancellation for large `j`.
    fn power_gap(&self, c: f64) -> f64 {
        if self.j == 0 {
            self.far.powf(c)
        } else {
            self.near.powf(c) * (c * (1.0 / self.j as f64).ln_1p()).exp_m1()
        }
    }

    fn b1(&self) -> f64 {
        let c = 1.0 - self.a;
        if self.j == 0 {
            // x^c ln x -> 0 at the lower limit
            return self.far.powf(c) * (self.far.ln() - 1.0 / c) / c;
        }
        // F(x) = x^c (ln x - 1/c) / c, F(far) - F(near) regrouped
        let gap = self.power_gap(c);
        gap * (self.far.ln() - 1.0 / c) / c + self.near.powf(c) * (1.0 / self.j as f64).ln_1p() / c
    }

    fn b2(&self) -> f64 {
        let c = 1.0 - self.a;
        self.power_gap(c) / c
    }

    fn r(&self, exp: &VariableExponent) -> Result<f64> {
        if self.j == 0 {
            return Ok(-exp.alpha_d1(0.0) * (1.0 + EULER_GAMMA));
        }
        Ok(-self.a / self.near + digamma(1.0 - self.a)? * exp.alpha_d1(self.near))
    }

    fn weight(&self, exp: &VariableExponent) -> Result<f64> {
        let d1 = if self.j == 0 {
            exp.alpha_d1(0.0)
        } else {
            exp.alpha_d1(self.near)
        };
        Ok((-d1 * self.b1() + self.r(exp)? * self.b2()) / gamma(1.0 - self.a)?)
    }
}

/// `b1[n][k] = ∫_{t_{k-1}}^{t_k} ln(t_n - s) (t_n - s)^(-alpha(t_n - t_k)) ds`.
pub fn weight_b1(n: usize, k: usize, tau: f64, exp: &VariableExponent) -> Result<f64> {
    check_indices(n, k, tau)?;
    Ok(Lag::new(n - k, tau, exp).b1())
}

/// `b2[n][k] = ∫_{t_{k-1}}^{t_k} (t_n - s)^(-alpha(t_n - t_k)) ds`.
pub fn weight_b2(n: usize, k: usize, tau: f64, exp: &VariableExponent) -> Result<f64> {
    check_indices(n, k, tau)?;
    Ok(Lag::new(n - k, tau, exp).b2())
}

pub fn weight_r(n: usize, k: usize, tau: f64, exp: &VariableExponent) -> Result<f64> {
    check_indices(n, k, tau)?;
    Lag::new(n - k, tau, exp).r(exp)
}

/// Single weight `b[n][k]`.
pub fn weight_b(n: usize, k: usize, tau: f64, exp: &VariableExponent) -> Result<f64> {
    check_indices(n, k, tau)?;
    Lag::new(n - k, tau, exp).weight(exp).map_err(|e| Error::Weight {
        n,
        k,
        source: Box::new(e),
    })
}

/// `b[n][k]` by adaptive quadrature of
/// `∫ (t_n - s)^(-a) (-alpha'(d) ln(t_n - s) + R[n][k]) ds / Gamma(1 - a)` over
/// `[t_{k-1}, t_k]`. Slow; meant as a cross-check of [`weight_b`].
pub fn weight_b_quadrature(n: usize, k: usize, tau: f64, exp: &VariableExponent) -> Result<f64> {
    check_indices(n, k, tau)?;
    let lag = Lag::new(n - k, tau, exp);
    let d1 = exp.alpha_d1(lag.near);
    let r = lag.r(exp)?;
    let t_n = n as f64 * tau;
    let integrand = |s: f64| {
        let x = t_n - s;
        (-lag.a * x.ln()).exp() * (-d1 * x.ln() + r)
    };
    let opts = QuadOptions {
        abs_tol: 1e-16,
        rel_tol: 1e-13,
        ..QuadOptions::default()
    };
    let res = integrate(integrand, (k - 1) as f64 * tau, k as f64 * tau, opts)?;
    Ok(res.value / gamma(1.0 - lag.a)?)
}

/// Lower-triangular table `b[n][k]`, `1 <= k <= n <= N`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable {
    n_steps: usize,
    tau: f64,
    // by_lag[j] = b[n][n - j]
    by_lag: Vec<f64>,
}

impl WeightTable {
    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `b[n][k]`, or `None` outside `1 <= k <= n <= N`.
    pub fn get(&self, n: usize, k: usize) -> Option<f64> {
        if k >= 1 && k <= n && n <= self.n_steps {
            Some(self.by_lag[n - k])
        } else {
            None
        }
    }

    /// Weight for lag `j = n - k`.
    pub fn lag(&self, j: usize) -> f64 {
        self.by_lag[j]
    }

    pub fn lags(&self) -> &[f64] {
        &self.by_lag
    }

    /// Row `n` as `(k, b[n][k])` for `k = 1..=n`.
    pub fn row(&self, n: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let n = n.min(self.n_steps);
        (1..=n).map(move |k| (k, self.by_lag[n - k]))
    }

    /// Every entry as `(n, k, b)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (1..=self.n_steps).flat_map(move |n| self.row(n).map(move |(k, b)| (n, k, b)))
    }

    pub fn is_finite(&self) -> bool {
        self.by_lag.iter().all(|b| b.is_finite())
    }
}

/// Computes the full weight table for `N` steps of size `tau`.
pub fn assemble_weights(n_steps: usize, tau: f64, exp: &VariableExponent) -> Result<WeightTable> {
    if n_steps < 1 {
        return Err(invalid("need at least one time step"));
    }
    check_indices(1, 1, tau)?;
    let by_lag = (0..n_steps)
        .map(|j| {
            let b = Lag::new(j, tau, exp).weight(exp);
            match b {
                Ok(v) if v.is_finite() => Ok(v),
                Ok(_) => Err(Error::Weight {
                    n: n_steps,
                    k: n_steps - j,
                    source: Box::new(Error::NonFinite { step: n_steps }),
                }),
                Err(e) => Err(Error::Weight {
                    n: n_steps,
                    k: n_steps - j,
                    source: Box::new(e),
                }),
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(WeightTable { n_steps, tau, by_lag })
}
