//! Piecewise-linear finite elements on a uniform mesh of `(0, 1)` with
//! homogeneous Dirichlet conditions eliminated from the unknowns.

use std::ops::{Deref, DerefMut};

use crate::error::{invalid, Error, Result};

/// Uniform mesh with `m_cells` cells and `m_cells - 1` interior nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mesh1D {
    m_cells: usize,
}

impl Mesh1D {
    pub fn new(m_cells: usize) -> Result<Self> {
        if m_cells < 2 {
            return Err(invalid(format!("mesh needs at least 2 cells, got {m_cells}")));
        }
        Ok(Self { m_cells })
    }

    pub fn cells(&self) -> usize {
        self.m_cells
    }

    pub fn interior_nodes(&self) -> usize {
        self.m_cells - 1
    }

    pub fn h(&self) -> f64 {
        1.0 / self.m_cells as f64
    }

    /// Coordinate of node `j` (0 and `m_cells` are the boundary nodes).
    pub fn node(&self, j: usize) -> f64 {
        j as f64 / self.m_cells as f64
    }

    /// Interior node coordinates `x_1, ..., x_{M-1}`.
    pub fn interior_coords(&self) -> Vec<f64> {
        (1..self.m_cells).map(|j| self.node(j)).collect()
    }
}

/// Nodal coefficients of a function in the P1 space, interior nodes only.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NodalVector(pub Vec<f64>);

impl NodalVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// `self += s * other`
    pub fn axpy(&mut self, s: f64, other: &NodalVector) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += s * b;
        }
    }

    pub fn max_abs_diff(&self, other: &NodalVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Discrete norm `sqrt(h * sum v_j^2)`.
    pub fn discrete_l2(&self, h: f64) -> f64 {
        (h * self.0.iter().map(|v| v * v).sum::<f64>()).sqrt()
    }
}

impl Deref for NodalVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for NodalVector {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl From<Vec<f64>> for NodalVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Tridiagonal matrix stored by diagonals; `sub[i]` sits in row `i + 1`,
/// `sup[i]` in row `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriDiagonalMatrix {
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
}

/// Pivots smaller than this in magnitude are treated as zero.
pub const PIVOT_FLOOR: f64 = 1e-300;

impl TriDiagonalMatrix {
    pub fn new(sub: Vec<f64>, diag: Vec<f64>, sup: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(invalid("empty tridiagonal matrix"));
        }
        for side in [&sub, &sup] {
            if side.len() != n - 1 {
                return Err(Error::LengthMismatch {
                    expected: n - 1,
                    found: side.len(),
                });
            }
        }
        Ok(Self { sub, diag, sup })
    }

    fn constant(n: usize, diag: f64, off: f64) -> Self {
        Self {
            sub: vec![off; n - 1],
            diag: vec![diag; n],
            sup: vec![off; n - 1],
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn sub(&self) -> &[f64] {
        &self.sub
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn sup(&self) -> &[f64] {
        &self.sup
    }

    pub fn is_symmetric(&self) -> bool {
        self.sub == self.sup
    }

    /// `a * self + b * other`, entry by entry.
    pub fn combine(&self, a: f64, other: &TriDiagonalMatrix, b: f64) -> Result<Self> {
        if other.dim() != self.dim() {
            return Err(Error::LengthMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let lin = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| a * p + b * q).collect();
        Ok(Self {
            sub: lin(&self.sub, &other.sub),
            diag: lin(&self.diag, &other.diag),
            sup: lin(&self.sup, &other.sup),
        })
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: x.len(),
            });
        }
        let mut y = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = self.diag[i] * x[i];
            if i > 0 {
                v += self.sub[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                v += self.sup[i] * x[i + 1];
            }
            y.push(v);
        }
        Ok(y)
    }

    /// Pivots of Gaussian elimination without row exchanges.
    pub fn pivots(&self) -> Vec<f64> {
        let n = self.dim();
        let mut piv = Vec::with_capacity(n);
        piv.push(self.diag[0]);
        for i in 1..n {
            let p = self.diag[i] - self.sub[i - 1] * self.sup[i - 1] / piv[i - 1];
            piv.push(p);
        }
        piv
    }

    /// Symmetric with strictly positive elimination pivots.
    pub fn is_spd(&self) -> bool {
        self.is_symmetric() && self.pivots().iter().all(|&p| p > 0.0)
    }

    /// Thomas algorithm.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if rhs.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: rhs.len(),
            });
        }
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut pivot = self.diag[0];
        if pivot.abs() < PIVOT_FLOOR {
            return Err(Error::ZeroPivot { row: 0, pivot });
        }
        if n > 1 {
            c[0] = self.sup[0] / pivot;
        }
        d[0] = rhs[0] / pivot;
        for i in 1..n {
            pivot = self.diag[i] - self.sub[i - 1] * c[i - 1];
            if !(pivot.abs() >= PIVOT_FLOOR) {
                return Err(Error::ZeroPivot { row: i, pivot });
            }
            if i + 1 < n {
                c[i] = self.sup[i] / pivot;
            }
            d[i] = (rhs[i] - self.sub[i - 1] * d[i - 1]) / pivot;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        Ok(d)
    }
}

/// Consistent P1 mass matrix: `4h/6` on the diagonal, `h/6` off it.
pub fn assemble_mass(mesh: &Mesh1D) -> TriDiagonalMatrix {
    let h = mesh.h();
    TriDiagonalMatrix::constant(mesh.interior_nodes(), 4.0 * h / 6.0, h / 6.0)
}

/// P1 stiffness matrix: `2/h` on the diagonal, `-1/h` off it.
pub fn assemble_stiffness(mesh: &Mesh1D) -> TriDiagonalMatrix {
    let h = mesh.h();
    TriDiagonalMatrix::constant(mesh.interior_nodes(), 2.0 / h, -1.0 / h)
}

/// `(f, phi_j)` with two-point Gauss quadrature on every cell.
pub fn load_vector<F: Fn(f64) -> f64>(mesh: &Mesh1D, f: F) -> NodalVector {
    let h = mesh.h();
    let m = mesh.cells();
    let offset = 0.5 / 3f64.sqrt();
    // reference points on [0, 1] and the matching values of the rising hat
    let pts = [0.5 - offset, 0.5 + offset];
    let mut load = vec![0.0; m - 1];
    for cell in 0..m {
        let x0 = mesh.node(cell);
        for &s in &pts {
            let fx = f(x0 + s * h) * 0.5 * h;
            // left node of the cell sees the falling hat, right node the rising one
            if cell >= 1 {
                load[cell - 1] += fx * (1.0 - s);
            }
            if cell + 1 < m {
                load[cell] += fx * s;
            }
        }
    }
    NodalVector(load)
}

/// Ritz projection of `u0` onto the P1 space. In one dimension it coincides
/// with nodal interpolation.
pub fn ritz_projection<F: Fn(f64) -> f64>(mesh: &Mesh1D, u0: F) -> Result<NodalVector> {
    let (left, right) = (u0(0.0), u0(1.0));
    if left.abs() > 1e-12 || right.abs() > 1e-12 {
        return Err(invalid(format!(
            "initial data must vanish on the boundary, got u0(0) = {left}, u0(1) = {right}"
        )));
    }
    let v = NodalVector(mesh.interior_coords().into_iter().map(u0).collect());
    if !v.is_finite() {
        return Err(invalid("initial data is not finite at the mesh nodes"));
    }
    Ok(v)
}

/// How a fine solution is matched to the coarse nodes in [`discrete_l2_diff`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefinementMode {
    /// Same mesh, finer time step: node `j` matches node `j`.
    TimeRefined,
    /// Mesh halved: coarse node `j` matches fine node `2j`.
    SpaceRefined,
}

/// `sqrt(h * sum_j |coarse_j - fine_matched(j)|^2)` over the coarse interior nodes.
pub fn discrete_l2_diff(coarse: &[f64], fine: &[f64], mode: RefinementMode, h: f64) -> Result<f64> {
    let sum: f64 = match mode {
        RefinementMode::TimeRefined => {
            if fine.len() != coarse.len() {
                return Err(Error::LengthMismatch {
                    expected: coarse.len(),
                    found: fine.len(),
                });
            }
            coarse.iter().zip(fine).map(|(c, f)| (c - f) * (c - f)).sum()
        }
        RefinementMode::SpaceRefined => {
            let expected = 2 * coarse.len() + 1;
            if fine.len() != expected {
                return Err(Error::LengthMismatch {
                    expected,
                    found: fine.len(),
                });
            }
            // interior coarse node j (1-based) sits at fine interior index 2j - 1
            coarse
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let d = c - fine[2 * i + 1];
                    d * d
                })
                .sum()
        }
    };
    Ok((h * sum).sqrt())
}

/// Continuous L2 distance between the P1 interpolant of `nodal` and `f`,
/// integrated with five-point Gauss on each cell.
pub fn l2_error_against<F: Fn(f64) -> f64>(mesh: &Mesh1D, nodal: &[f64], f: F) -> Result<f64> {
    if nodal.len() != mesh.interior_nodes() {
        return Err(Error::LengthMismatch {
            expected: mesh.interior_nodes(),
            found: nodal.len(),
        });
    }
    const GAUSS5: [(f64, f64); 5] = [
        (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
        (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (0.0, 0.568_888_888_888_888_9),
        (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (0.906_179_845_938_664, 0.236_926_885_056_189_1),
    ];
    let h = mesh.h();
    let value = |j: usize| if j == 0 || j == mesh.cells() { 0.0 } else { nodal[j - 1] };
    let mut acc = 0.0;
    for cell in 0..mesh.cells() {
        let (u0, u1) = (value(cell), value(cell + 1));
        let x0 = mesh.node(cell);
        for &(xi, w) in &GAUSS5 {
            let s = 0.5 * (xi + 1.0);
            let d = u0 * (1.0 - s) + u1 * s - f(x0 + s * h);
            acc += 0.5 * h * w * d * d;
        }
    }
    Ok(acc.sqrt())
}
