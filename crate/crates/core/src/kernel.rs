//! The memory kernel `g(t) = d/dt [t^(-alpha(t)) / Gamma(1 - alpha(t))]`.
//!
//! The kernel is evaluated through the split `g = P(t) * G(t)` with the
//! prefactor `P(t) = t^(-alpha(t)) / Gamma(1 - alpha(t))` and
//! `G(t) = -alpha'(t) ln t - alpha(t)/t + psi(1 - alpha(t)) alpha'(t)`.
//! `P(t) -> 1` as `t -> 0+`, so `∫_0^t g = P(t) - 1`.

use crate::error::{invalid, Result};
use crate::exponent::VariableExponent;
use crate::special::{digamma, gamma};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEvaluation {
    pub t: f64,
    pub prefactor: f64,
    pub g_factor: f64,
    pub g_value: f64,
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("kernel needs t > 0, got {t}")))
    }
}

/// `t^(-alpha(t)) / Gamma(1 - alpha(t))`, computed as `exp(-alpha ln t) / Gamma(1 - alpha)`.
pub fn kernel_prefactor(exp: &VariableExponent, t: f64) -> Result<f64> {
    check_time(t)?;
    let a = exp.alpha(t);
    Ok((-a * t.ln()).exp() / gamma(1.0 - a)?)
}

/// The factor `G(t)` of the kernel split.
pub fn g_factor(exp: &VariableExponent, t: f64) -> Result<f64> {
    check_time(t)?;
    let a = exp.alpha(t);
    let d1 = exp.alpha_d1(t);
    Ok(-d1 * t.ln() - exp.alpha_over_t(t) + digamma(1.0 - a)? * d1)
}

pub fn g_kernel(exp: &VariableExponent, t: f64) -> Result<KernelEvaluation> {
    let prefactor = kernel_prefactor(exp, t)?;
    let g_factor = g_factor(exp, t)?;
    Ok(KernelEvaluation {
        t,
        prefactor,
        g_factor,
        g_value: prefactor * g_factor,
    })
}
