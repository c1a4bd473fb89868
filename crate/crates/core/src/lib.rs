//! Solver for the multiscale diffusion model
//!
//! ```text
//! u_t - ∂_t^{alpha(t)} Δu = f   on (0, 1) x (0, T],   alpha(0) = 0,
//! ```
//!
//! which behaves like the heat equation near `t = 0` and like subdiffusion
//! later on. The Riemann–Liouville operator is rewritten as `Δu + g * Δu` with
//! the kernel `g(t) = d/dt [t^(-alpha(t)) / Gamma(1 - alpha(t))]`, and the
//! resulting equation is discretized with backward Euler in time, P1 finite
//! elements in space, and a product-integration rule for the memory term.
//!
//! * [`exponent`]: exponent profiles and their admissibility checks
//! * [`kernel`]: the memory kernel and its split into prefactor and `G(t)`
//! * [`weights`]: memory weights `b[n][k]`
//! * [`fem1d`]: mesh, mass/stiffness matrices, Thomas solver, discrete norms
//! * [`stepper`]: the time-stepping scheme
//! * [`reference`]: heat and constant-exponent comparison models
//! * [`harness`]: experiment configuration, convergence studies and output

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod exponent;
pub mod fem1d;
pub mod harness;
pub mod kernel;
pub mod quadrature;
pub mod reference;
pub mod special;
pub mod stepper;
pub mod weights;

pub use error::{Error, Result};
pub use exponent::{assess_assumption_a, validate_assumption_a, CaseClass, ValidationReport, VariableExponent};
pub use fem1d::{Mesh1D, NodalVector, RefinementMode, TriDiagonalMatrix};
pub use kernel::{g_factor, g_kernel, kernel_prefactor, KernelEvaluation};
pub use stepper::{sample_solution, solve, SolutionHistory, SolverConfig};
pub use weights::{assemble_weights, WeightTable};
