mod common;

use common::weight_exponents;
use msd_core::quadrature::{integrate, QuadOptions};
use msd_core::weights::{weight_b, weight_b1, weight_b2, weight_b_quadrature};
use msd_core::{assemble_weights, VariableExponent};
use proptest::prelude::*;

fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let opts = QuadOptions {
        abs_tol: 1e-16,
        rel_tol: 1e-13,
        ..QuadOptions::default()
    };
    integrate(f, a, b, opts).unwrap().value
}

#[test]
fn b1_matches_quadrature() {
    let e = VariableExponent::one_minus_exp(1.0);
    let (n, k, tau) = (5usize, 2usize, 0.125);
    let t_n = n as f64 * tau;
    let a = e.alpha((n - k) as f64 * tau);
    let q = quad(
        |s| (t_n - s).ln() * (t_n - s).powf(-a),
        (k - 1) as f64 * tau,
        k as f64 * tau,
    );
    let b1 = weight_b1(n, k, tau, &e).unwrap();
    assert!((b1 - q).abs() <= 1e-10 * q.abs());
    assert!((b1 + 0.134_910_336_369_974_08).abs() < 1e-14);
}

#[test]
fn b2_matches_quadrature() {
    let e = VariableExponent::sine(1.0);
    let (n, k, tau) = (10usize, 3usize, 1.0 / 16.0);
    let t_n = n as f64 * tau;
    let a = e.alpha((n - k) as f64 * tau);
    let q = quad(|s| (t_n - s).powf(-a), (k - 1) as f64 * tau, k as f64 * tau);
    let b2 = weight_b2(n, k, tau, &e).unwrap();
    assert!((b2 - q).abs() <= 1e-10 * q.abs());
}

#[test]
fn diagonal_b1_is_log_integral() {
    let e = VariableExponent::one_minus_exp(1.0);
    for tau in [0.25, 1e-3] {
        let q = quad(|s: f64| (tau - s).ln(), 0.0, tau);
        let b1 = weight_b1(3, 3, tau, &e).unwrap();
        assert!((b1 - tau * (tau.ln() - 1.0)).abs() < 1e-15);
        assert!((b1 - q).abs() < 1e-12 * q.abs());
    }
}

#[test]
fn oracle_for_four_step_table() {
    let e = VariableExponent::one_minus_exp(1.0);
    let table = assemble_weights(4, 0.25, &e).unwrap();
    assert_eq!(table.entries().count(), 10);
    for (n, k, b) in table.entries() {
        let q = weight_b_quadrature(n, k, 0.25, &e).unwrap();
        assert!(
            (b - q).abs() <= (1e-10 * q.abs()).max(1e-14),
            "b[{n}][{k}] = {b} vs {q}"
        );
    }
}

#[test]
fn tables_are_finite() {
    for e in weight_exponents() {
        for n_steps in [1usize, 7, 64, 1000] {
            let t = assemble_weights(n_steps, 1.0 / n_steps as f64, &e).unwrap();
            assert!(t.is_finite(), "{} N = {n_steps}", e.name());
        }
    }
}

fn envelope(n: usize, k: usize, tau: f64, alpha_star: f64) -> f64 {
    let p = (1.0 - alpha_star) / 2.0;
    let (near, far) = ((n - k) as f64 * tau, (n - k + 1) as f64 * tau);
    (far.powf(p) - near.powf(p)) / p
}

fn envelope_constant(e: &VariableExponent, n_steps: usize) -> f64 {
    let tau = 1.0 / n_steps as f64;
    let table = assemble_weights(n_steps, tau, e).unwrap();
    table
        .entries()
        .map(|(n, k, b)| b.abs() / envelope(n, k, tau, e.alpha_star()))
        .fold(0.0, f64::max)
}

#[test]
fn envelope_constant_is_stable_under_halving() {
    for e in &weight_exponents()[..3] {
        let constants: Vec<f64> = [16usize, 32, 64, 128, 256]
            .iter()
            .map(|&n| envelope_constant(e, n))
            .collect();
        assert!(constants.iter().all(|c| c.is_finite() && *c > 0.0));
        for w in constants.windows(2) {
            assert!(w[1] <= w[0] * 1.001, "{}: {constants:?}", e.name());
        }
    }
}

#[test]
fn sine_band_is_dominated_by_envelope() {
    // g changes sign for sin t, so |b[n][1]| is small at lag 1, peaks near
    // lag 4 and only then decays; the envelope still dominates the band.
    let e = VariableExponent::sine(1.0);
    let tau = 0.125;
    let table = assemble_weights(8, tau, &e).unwrap();
    let c = envelope_constant(&e, 8);
    let band: Vec<f64> = (1..=8).map(|n| table.get(n, 1).unwrap()).collect();
    assert!(band[0] > 0.0 && band[1] < 0.0, "{band:?}");
    assert!(
        band[1].abs() < band[4].abs() && band[7].abs() < band[4].abs(),
        "{band:?}"
    );
    for (i, b) in band.iter().enumerate() {
        assert!(b.abs() <= c * envelope(i + 1, 1, tau, e.alpha_star()) * (1.0 + 1e-12));
    }
}

#[test]
fn shifted_subtable_agrees() {
    // Weights on [0, 1] with N = 32 restricted to rows n <= 16 equal the
    // N = 16 table on [0, 1/2] with the same step.
    let e = VariableExponent::one_minus_exp(1.0);
    let tau = 1.0 / 32.0;
    let big = assemble_weights(32, tau, &e).unwrap();
    let small = assemble_weights(16, tau, &e).unwrap();
    for (n, k, b) in small.entries() {
        assert_eq!(big.get(n, k), Some(b));
        // and the row shift n -> n + 16, k -> k + 16 keeps the lag
        assert_eq!(big.get(n + 16, k + 16), Some(b));
    }
}

proptest! {
    #[test]
    fn table_matches_pointwise(n_steps in 1usize..40, which in 0usize..4, seed in 0usize..1000) {
        let e = &weight_exponents()[which];
        let tau = 1.0 / n_steps as f64;
        let table = assemble_weights(n_steps, tau, e).unwrap();
        let n = 1 + seed % n_steps;
        let k = 1 + (seed / 7) % n;
        prop_assert_eq!(table.get(n, k).unwrap(), weight_b(n, k, tau, e).unwrap());
        prop_assert!(table.get(n, n + 1).is_none());
        prop_assert!(table.get(n, 0).is_none());
    }

    #[test]
    fn zero_exponent_table_vanishes(n_steps in 1usize..200, t_final in 0.01f64..10.0) {
        let table = assemble_weights(n_steps, t_final / n_steps as f64, &VariableExponent::zero()).unwrap();
        prop_assert!(table.entries().all(|(_, _, b)| b == 0.0));
    }

    #[test]
    fn b2_positive_and_bounded(n in 1usize..64, k_off in 0usize..64, tau in 1e-4f64..0.25) {
        let k = n - k_off % n;
        let e = VariableExponent::one_minus_exp(64.0 * 0.25);
        let b2 = weight_b2(n, k, tau, &e).unwrap();
        // (t_n - s)^(-a) lies between far^(-a) and near^(-a) on the panel
        let (near, far) = ((n - k) as f64 * tau, (n - k + 1) as f64 * tau);
        let a = e.alpha(near);
        prop_assert!(b2 > 0.0);
        prop_assert!(b2 >= tau * far.powf(-a) * (1.0 - 1e-12));
        if n > k {
            prop_assert!(b2 <= tau * near.powf(-a) * (1.0 + 1e-12));
        }
    }
}
