//! Comparison models: the heat equation (`alpha ≡ 0`) and the constant-exponent
//! subdiffusion model `u_t - ∂_t^ᾱ Δu = f`.

use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::exponent::VariableExponent;
use crate::fem1d::{assemble_mass, assemble_stiffness, ritz_projection, Mesh1D, NodalVector};
use crate::stepper::{sample_solution, solve, SolutionHistory, SolverConfig, SpatialFn};

/// Backward Euler for `u_t - Δu = f`. The exponent of `config` is ignored.
pub fn heat_solve(config: &SolverConfig) -> Result<SolutionHistory> {
    if !(config.t_final > 0.0) || config.n_steps < 1 {
        return Err(invalid("heat solve needs T > 0 and N >= 1"));
    }
    let tau = config.tau();
    let mesh = &config.mesh;
    let mass = assemble_mass(mesh);
    let lhs = mass.combine(1.0 / tau, &assemble_stiffness(mesh), 1.0)?;

    let mut snapshots = vec![ritz_projection(mesh, |x| (config.initial)(x))?];
    for n in 1..=config.n_steps {
        let mut rhs = mass.mul_vec(&snapshots[n - 1])?;
        for v in rhs.iter_mut() {
            *v /= tau;
        }
        if let Some(load) = config.load_at(n) {
            for (r, f) in rhs.iter_mut().zip(load.iter()) {
                *r += f;
            }
        }
        let next = NodalVector(lhs.solve(&rhs)?);
        if !next.is_finite() {
            return Err(Error::NonFinite { step: n });
        }
        snapshots.push(next);
    }
    let mut config = config.clone();
    config.exponent = VariableExponent::zero();
    Ok(SolutionHistory { config, snapshots })
}

/// Coefficients of `(1 - z)^alpha`: `w_0 = 1`, `w_j = w_{j-1} (j - 1 - alpha) / j`.
pub fn grunwald_weights(alpha: f64, count: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(count);
    if count == 0 {
        return w;
    }
    w.push(1.0);
    for j in 1..count {
        let prev = w[j - 1];
        w.push(prev * (j as f64 - 1.0 - alpha) / j as f64);
    }
    w
}

#[derive(Debug, Clone)]
pub struct ConstantExponentConfig {
    pub alpha_bar: f64,
    /// Grid, data and source; the exponent field is unused.
    pub base: SolverConfig,
}

/// Backward Euler in time with first-order convolution quadrature for the
/// Riemann–Liouville term. `U_0` is part of the convolution history.
pub fn constant_subdiffusion_solve(config: &ConstantExponentConfig) -> Result<SolutionHistory> {
    let alpha = config.alpha_bar;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("constant exponent must lie in (0, 1), got {alpha}")));
    }
    let base = &config.base;
    if !(base.t_final > 0.0) || base.n_steps < 1 {
        return Err(invalid("subdiffusion solve needs T > 0 and N >= 1"));
    }
    let tau = base.tau();
    let scale = tau.powf(-alpha);
    let omega = grunwald_weights(alpha, base.n_steps + 1);
    let mesh = &base.mesh;
    let mass = assemble_mass(mesh);
    let stiff = assemble_stiffness(mesh);
    let lhs = mass.combine(1.0 / tau, &stiff, scale * omega[0])?;

    let mut snapshots = vec![ritz_projection(mesh, |x| (base.initial)(x))?];
    let mut memory = NodalVector::zeros(mesh.interior_nodes());
    for n in 1..=base.n_steps {
        memory.iter_mut().for_each(|v| *v = 0.0);
        for j in 1..=n {
            memory.axpy(omega[j], &snapshots[n - j]);
        }
        let history_term = stiff.mul_vec(&memory)?;
        let mut rhs = mass.mul_vec(&snapshots[n - 1])?;
        for (r, m) in rhs.iter_mut().zip(&history_term) {
            *r = *r / tau - scale * m;
        }
        if let Some(load) = base.load_at(n) {
            for (r, f) in rhs.iter_mut().zip(load.iter()) {
                *r += f;
            }
        }
        let next = NodalVector(lhs.solve(&rhs)?);
        if !next.is_finite() {
            return Err(Error::NonFinite { step: n });
        }
        snapshots.push(next);
    }
    Ok(SolutionHistory {
        config: base.clone(),
        snapshots,
    })
}

/// `u(0.5, t_n)` for the three models of the multiscale comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure1Series {
    pub times: Vec<f64>,
    pub heat: Vec<f64>,
    pub multiscale: Vec<f64>,
    pub subdiffusion: Vec<f64>,
}

/// Runs the multiscale model with the smooth transition exponent reaching
/// `alpha_end` at `T`, the heat equation, and the constant-exponent model with
/// `ᾱ = alpha_end`, all from `u0 = sin(pi x)` with `f ≡ 0`.
pub fn figure1_profiles(t_final: f64, alpha_end: f64, n_steps: usize, m_cells: usize) -> Result<Figure1Series> {
    if !(alpha_end > 0.0 && alpha_end < 1.0) {
        return Err(invalid(format!("alpha(T) must lie in (0, 1), got {alpha_end}")));
    }
    let mesh = Mesh1D::new(m_cells)?;
    let initial: SpatialFn = Arc::new(|x: f64| (std::f64::consts::PI * x).sin());
    let exponent = VariableExponent::smooth_transition(t_final, alpha_end);
    let multi_cfg = SolverConfig::new(t_final, n_steps, mesh, exponent, initial.clone());
    let heat_cfg = SolverConfig::new(t_final, n_steps, mesh, VariableExponent::zero(), initial.clone());
    let sub_cfg = ConstantExponentConfig {
        alpha_bar: alpha_end,
        base: heat_cfg.clone(),
    };

    let (multi, (heat, sub)) = rayon::join(
        || solve(&multi_cfg),
        || rayon::join(|| heat_solve(&heat_cfg), || constant_subdiffusion_solve(&sub_cfg)),
    );
    let (multi, heat, sub) = (multi?, heat?, sub?);

    let probe =
        |h: &SolutionHistory| -> Result<Vec<f64>> { (0..=n_steps).map(|n| sample_solution(h, 0.5, n)).collect() };
    Ok(Figure1Series {
        times: multi.times().collect(),
        heat: probe(&heat)?,
        multiscale: probe(&multi)?,
        subdiffusion: probe(&sub)?,
    })
}
