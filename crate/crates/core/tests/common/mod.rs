#![allow(dead_code)]

use std::sync::Arc;

use msd_core::quadrature::{integrate, QuadOptions};
use msd_core::{g_kernel, VariableExponent};

/// `alpha(t) = t^2 / 2`, the second-derivative-only case.
pub fn half_square() -> VariableExponent {
    VariableExponent::new(
        "half-square",
        Arc::new(|t: f64| 0.5 * t * t),
        Arc::new(|t: f64| t),
        Arc::new(|_| 1.0),
        0.5,
        1.0,
    )
}

/// The four exponents used throughout the weight checks, on `[0, 1]`.
pub fn weight_exponents() -> Vec<VariableExponent> {
    vec![
        VariableExponent::one_minus_exp(1.0),
        VariableExponent::sine(1.0),
        VariableExponent::smooth_transition(1.0, 0.4),
        VariableExponent::zero(),
    ]
}

/// `∫_0^t g` by adaptive quadrature; `g` has an integrable log singularity at 0.
pub fn kernel_integral(exp: &VariableExponent, t: f64) -> f64 {
    let opts = QuadOptions {
        abs_tol: 1e-13,
        rel_tol: 1e-12,
        max_intervals: 50_000,
    };
    integrate(|s| g_kernel(exp, s).unwrap().g_value, 0.0, t, opts)
        .unwrap()
        .value
}

/// Log-spaced grid on `[lo, hi]` with `points` samples.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

pub const TABLE1_TIME: [f64; 5] = [1.7768e-4, 9.9362e-5, 5.3033e-5, 2.7560e-5, 1.4098e-5];
pub const TABLE1_TIME_RATES: [f64; 4] = [0.8385, 0.9058, 0.9443, 0.9671];
pub const TABLE1_SPACE: [f64; 5] = [1.4650e-3, 3.7606e-4, 9.4602e-5, 2.3687e-5, 5.9240e-6];
pub const TABLE1_SPACE_RATES: [f64; 4] = [1.9619, 1.9910, 1.9978, 1.9994];
pub const TABLE2_TIME: [f64; 5] = [2.1888e-5, 1.2108e-5, 6.4090e-6, 3.3111e-6, 1.6871e-6];
pub const TABLE2_TIME_RATES: [f64; 4] = [0.8542, 0.9177, 0.9528, 0.9728];
pub const TABLE2_SPACE: [f64; 5] = [2.7669e-5, 7.2184e-6, 1.8234e-6, 4.5702e-7, 1.1433e-7];
pub const TABLE2_SPACE_RATES: [f64; 4] = [1.9385, 1.9851, 1.9963, 1.9991];
