//! Backward Euler / P1 finite-element scheme for the reformulated model
//! `u_t - Δu - g * Δu = f`.
//!
//! Each step solves
//!
//! ```text
//! [M/tau + (1 + b[n][n]) A] U_n = (M/tau) U_{n-1} + F_n - A * sum_{k<n} b[n][k] U_k
//! ```

use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::exponent::{validate_assumption_a, VariableExponent};
use crate::fem1d::{assemble_mass, assemble_stiffness, load_vector, ritz_projection, Mesh1D, NodalVector};
use crate::weights::{assemble_weights, WeightTable};

pub type SpatialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type SourceFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

const VALIDATION_SAMPLES: usize = 257;

/// Everything needed for one run on `[0, T] x (0, 1)`.
#[derive(Clone)]
pub struct SolverConfig {
    pub t_final: f64,
    pub n_steps: usize,
    pub mesh: Mesh1D,
    pub exponent: VariableExponent,
    /// `f(x, t)`; `None` means `f ≡ 0`.
    pub source: Option<SourceFn>,
    pub initial: SpatialFn,
}

impl std::fmt::Debug for SolverConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SolverConfig")
            .field("t_final", &self.t_final)
            .field("n_steps", &self.n_steps)
            .field("mesh", &self.mesh)
            .field("exponent", &self.exponent)
            .field("source", &self.source.is_some())
            .finish()
    }
}

impl SolverConfig {
    pub fn new(t_final: f64, n_steps: usize, mesh: Mesh1D, exponent: VariableExponent, initial: SpatialFn) -> Self {
        Self {
            t_final,
            n_steps,
            mesh,
            exponent,
            source: None,
            initial,
        }
    }

    pub fn with_source(mut self, source: SourceFn) -> Self {
        self.source = Some(source);
        self
    }

    pub fn tau(&self) -> f64 {
        self.t_final / self.n_steps as f64
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.tau()
    }

    /// Checks the time grid and the exponent.
    pub fn validate(&self) -> Result<()> {
        if !(self.t_final > 0.0) || !self.t_final.is_finite() {
            return Err(invalid(format!("final time must be positive, got {}", self.t_final)));
        }
        if self.n_steps < 1 {
            return Err(invalid("need at least one time step"));
        }
        validate_assumption_a(&self.exponent, self.t_final, VALIDATION_SAMPLES)?;
        Ok(())
    }

    pub(crate) fn load_at(&self, n: usize) -> Option<NodalVector> {
        self.source.as_ref().map(|f| {
            let t = self.time(n);
            load_vector(&self.mesh, |x| f(x, t))
        })
    }
}

/// Snapshots `U_0, ..., U_N` of a run.
#[derive(Debug, Clone)]
pub struct SolutionHistory {
    pub config: SolverConfig,
    pub snapshots: Vec<NodalVector>,
}

impl SolutionHistory {
    pub fn final_snapshot(&self) -> &NodalVector {
        self.snapshots.last().expect("history holds U_0")
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.snapshots.len()).map(move |n| self.config.time(n))
    }
}

/// Runs the fully-discrete scheme and returns the full history.
pub fn solve(config: &SolverConfig) -> Result<SolutionHistory> {
    config.validate()?;
    let weights = assemble_weights(config.n_steps, config.tau(), &config.exponent)?;
    solve_with_weights(config, &weights)
}

/// Same as [`solve`] with a precomputed weight table.
pub fn solve_with_weights(config: &SolverConfig, weights: &WeightTable) -> Result<SolutionHistory> {
    if weights.n_steps() < config.n_steps || (weights.tau() - config.tau()).abs() > 1e-15 * config.tau() {
        return Err(invalid("weight table does not match the time grid"));
    }
    let tau = config.tau();
    let mesh = &config.mesh;
    let mass = assemble_mass(mesh);
    let stiff = assemble_stiffness(mesh);
    let dofs = mesh.interior_nodes();

    let mut snapshots = Vec::with_capacity(config.n_steps + 1);
    snapshots.push(ritz_projection(mesh, |x| (config.initial)(x))?);

    let mut memory = NodalVector::zeros(dofs);
    for n in 1..=config.n_steps {
        let b_nn = weights.lag(0);
        if !(1.0 + b_nn > 0.0) {
            return Err(Error::StepTooLarge { tau, value: 1.0 + b_nn });
        }
        let lhs = mass.combine(1.0 / tau, &stiff, 1.0 + b_nn)?;

        memory.iter_mut().for_each(|v| *v = 0.0);
        for (k, snap) in snapshots.iter().enumerate().take(n).skip(1) {
            let b = weights.lag(n - k);
            if b != 0.0 {
                memory.axpy(b, snap);
            }
        }
        let history_term = stiff.mul_vec(&memory)?;

        let mut rhs = mass.mul_vec(&snapshots[n - 1])?;
        rhs.iter_mut().for_each(|v| *v /= tau);
        if let Some(load) = config.load_at(n) {
            rhs.iter_mut().zip(load.iter()).for_each(|(r, f)| *r += f);
        }
        rhs.iter_mut().zip(&history_term).for_each(|(r, m)| *r -= m);

        let next = NodalVector(lhs.solve(&rhs)?);
        if !next.is_finite() {
            return Err(Error::NonFinite { step: n });
        }
        snapshots.push(next);
    }
    Ok(SolutionHistory {
        config: config.clone(),
        snapshots,
    })
}

/// Piecewise-linear value of snapshot `n` at `x`.
pub fn sample_solution(history: &SolutionHistory, x: f64, n: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(invalid(format!("x = {x} lies outside [0, 1]")));
    }
    let snap = history
        .snapshots
        .get(n)
        .ok_or_else(|| invalid(format!("step {n} exceeds N = {}", history.snapshots.len() - 1)))?;
    let m = history.config.mesh.cells();
    let value = |j: usize| if j == 0 || j == m { 0.0 } else { snap[j - 1] };
    let pos = x * m as f64;
    let cell = (pos.floor() as usize).min(m - 1);
    let s = pos - cell as f64;
    if s == 0.0 {
        return Ok(value(cell));
    }
    Ok((1.0 - s) * value(cell) + s * value(cell + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sine() -> SpatialFn {
        Arc::new(|x: f64| (PI * x).sin())
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn one_heat_step_matches_dense_oracle() {
        let mesh = Mesh1D::new(8).unwrap();
        let cfg = SolverConfig::new(0.1, 1, mesh, VariableExponent::zero(), sine());
        let hist = solve(&cfg).unwrap();

        // Dense Gaussian elimination on (M/tau + A) U1 = (M/tau) U0.
        let n = 7;
        let h = 1.0 / 8.0;
        let tau = 0.1;
        let mut a = vec![vec![0.0; n + 1]; n];
        let u0: Vec<f64> = (1..=n).map(|j| (PI * j as f64 * h).sin()).collect();
        for i in 0..n {
            for j in 0..n {
                let (m, k) = match (i as isize - j as isize).abs() {
                    0 => (4.0 * h / 6.0, 2.0 / h),
                    1 => (h / 6.0, -1.0 / h),
                    _ => (0.0, 0.0),
                };
                a[i][j] = m / tau + k;
                a[i][n] += m / tau * u0[j];
            }
        }
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))
                .unwrap();
            a.swap(col, piv);
            for row in col + 1..n {
                let f = a[row][col] / a[col][col];
                for c in col..=n {
                    a[row][c] -= f * a[col][c];
                }
            }
        }
        let mut x = vec![0.0; n];
        for row in (0..n).rev() {
            let s: f64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
            x[row] = (a[row][n] - s) / a[row][row];
        }
        for (got, want) in hist.snapshots[1].iter().zip(&x) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn initial_snapshot_is_ritz_projection() {
        let mesh = Mesh1D::new(16).unwrap();
        let cfg = SolverConfig::new(1.0, 4, mesh, VariableExponent::one_minus_exp(1.0), sine());
        let hist = solve(&cfg).unwrap();
        assert_eq!(hist.snapshots.len(), 5);
        assert_eq!(hist.snapshots[0], ritz_projection(&mesh, |x| (PI * x).sin()).unwrap());
    }

    #[test]
    fn sample_solution_boundary_and_nodes() {
        let mesh = Mesh1D::new(8).unwrap();
        let cfg = SolverConfig::new(0.5, 4, mesh, VariableExponent::one_minus_exp(0.5), sine());
        let hist = solve(&cfg).unwrap();
        assert_eq!(sample_solution(&hist, 0.0, 2).unwrap(), 0.0);
        assert_eq!(sample_solution(&hist, 1.0, 2).unwrap(), 0.0);
        assert_eq!(sample_solution(&hist, 0.375, 3).unwrap(), hist.snapshots[3][2]);
        let mid = sample_solution(&hist, 0.4375, 3).unwrap();
        assert!((mid - 0.5 * (hist.snapshots[3][2] + hist.snapshots[3][3])).abs() < 1e-15);
        assert!(sample_solution(&hist, 1.5, 0).is_err());
        assert!(sample_solution(&hist, 0.5, 5).is_err());
    }

    #[test]
    fn rejects_invalid_config() {
        let mesh = Mesh1D::new(8).unwrap();
        let bad = SolverConfig::new(0.0, 4, mesh, VariableExponent::zero(), sine());
        assert!(solve(&bad).is_err());
        let bad = SolverConfig::new(1.0, 0, mesh, VariableExponent::zero(), sine());
        assert!(solve(&bad).is_err());
        let bad = SolverConfig::new(1.0, 4, mesh, VariableExponent::zero(), Arc::new(|x: f64| x + 1.0));
        assert!(solve(&bad).is_err());
    }

    #[test]
    fn source_term_drives_zero_initial_data() {
        let mesh = Mesh1D::new(16).unwrap();
        let cfg = SolverConfig::new(0.5, 16, mesh, VariableExponent::one_minus_exp(0.5), Arc::new(|_| 0.0))
            .with_source(Arc::new(|x: f64, _t: f64| (PI * x).sin()));
        let hist = solve(&cfg).unwrap();
        assert!(hist.final_snapshot().iter().all(|&v| v > 0.0));
    }
}
