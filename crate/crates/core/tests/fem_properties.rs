use std::f64::consts::PI;

use msd_core::fem1d::{
    assemble_mass, assemble_stiffness, discrete_l2_diff, l2_error_against, load_vector, ritz_projection,
};
use msd_core::{Mesh1D, RefinementMode, TriDiagonalMatrix};
use proptest::prelude::*;

#[allow(clippy::needless_range_loop)]
fn dense_solve(a: &TriDiagonalMatrix, rhs: &[f64]) -> Vec<f64> {
    let n = a.dim();
    let mut m = vec![vec![0.0; n + 1]; n];
    for i in 0..n {
        m[i][i] = a.diag()[i];
        if i + 1 < n {
            m[i][i + 1] = a.sup()[i];
            m[i + 1][i] = a.sub()[i];
        }
        m[i][n] = rhs[i];
    }
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))
            .unwrap();
        m.swap(col, piv);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for c in col..=n {
                m[row][c] -= f * m[col][c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| m[i][j] * x[j]).sum();
        x[i] = (m[i][n] - s) / m[i][i];
    }
    x
}

#[test]
fn interpolation_error_is_second_order() {
    let funcs: [fn(f64) -> f64; 2] = [|x| (PI * x).sin(), |x| x * x * (1.0 - x) * (1.0 - x)];
    for f in funcs {
        let cells = [8usize, 16, 32, 64, 128];
        let errs: Vec<f64> = cells
            .iter()
            .map(|&m| {
                let mesh = Mesh1D::new(m).unwrap();
                l2_error_against(&mesh, &ritz_projection(&mesh, f).unwrap(), f).unwrap()
            })
            .collect();
        for w in errs.windows(2) {
            let rate = (w[0] / w[1]).log2();
            assert!((rate - 2.0).abs() <= 0.05, "{errs:?}");
        }
    }
}

#[test]
fn galerkin_orthogonality_of_interpolant() {
    // A I_h u = (-u'', phi_j) exactly when the load quadrature is exact.
    let u = |x: f64| x * x * (1.0 - x) * (1.0 - x);
    let minus_u2 = |x: f64| -(2.0 - 12.0 * x + 12.0 * x * x);
    for m in [4usize, 16, 64] {
        let mesh = Mesh1D::new(m).unwrap();
        let au = assemble_stiffness(&mesh)
            .mul_vec(&ritz_projection(&mesh, u).unwrap())
            .unwrap();
        let load = load_vector(&mesh, minus_u2);
        let res = au
            .iter()
            .zip(load.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(res < 1e-12, "M = {m}: residual {res}");
    }
}

#[test]
fn poisson_with_unit_load_is_nodally_exact() {
    let mesh = Mesh1D::new(8).unwrap();
    let x = assemble_stiffness(&mesh).solve(&load_vector(&mesh, |_| 1.0)).unwrap();
    for (j, v) in x.iter().enumerate() {
        let t = mesh.node(j + 1);
        assert!((v - t * (1.0 - t) / 2.0).abs() < 1e-14);
    }
}

#[test]
fn discrete_sine_is_generalized_eigenvector() {
    let mesh = Mesh1D::new(32).unwrap();
    let v: Vec<f64> = mesh.interior_coords().iter().map(|&x| (PI * x).sin()).collect();
    let av = assemble_stiffness(&mesh).mul_vec(&v).unwrap();
    let mv = assemble_mass(&mesh).mul_vec(&v).unwrap();
    let lambda =
        av.iter().zip(&v).map(|(a, x)| a * x).sum::<f64>() / mv.iter().zip(&v).map(|(m, x)| m * x).sum::<f64>();
    assert!((lambda / (PI * PI) - 1.0).abs() < 0.01, "lambda = {lambda}");
    for (a, m) in av.iter().zip(&mv) {
        assert!((a - lambda * m).abs() < 1e-10);
    }
}

#[test]
fn l2_diff_examples() {
    let a = [0.3, -1.0, 2.0];
    assert_eq!(
        discrete_l2_diff(&a, &a, RefinementMode::TimeRefined, 0.25).unwrap(),
        0.0
    );
    let fine = [9.0, 1.0, 9.0, 2.0, 9.0, 3.0, 9.0];
    let d = discrete_l2_diff(&[0.0; 3], &fine, RefinementMode::SpaceRefined, 0.25).unwrap();
    assert!((d - (0.25f64 * 14.0).sqrt()).abs() < 1e-15);
    assert!(discrete_l2_diff(&a, &fine, RefinementMode::TimeRefined, 0.25).is_err());
    assert!(discrete_l2_diff(&a, &a, RefinementMode::SpaceRefined, 0.25).is_err());
}

fn spd_system() -> impl Strategy<Value = (TriDiagonalMatrix, Vec<f64>)> {
    (2usize..=32).prop_flat_map(|n| {
        (
            prop::collection::vec(-1.0f64..1.0, n - 1),
            prop::collection::vec(0.1f64..2.0, n),
            prop::collection::vec(-10.0f64..10.0, n),
        )
            .prop_map(move |(off, extra, rhs)| {
                // symmetric and strictly diagonally dominant with positive diagonal
                let diag: Vec<f64> = (0..n)
                    .map(|i| {
                        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
                        let right = if i + 1 < n { off[i].abs() } else { 0.0 };
                        left + right + extra[i]
                    })
                    .collect();
                (TriDiagonalMatrix::new(off.clone(), diag, off).unwrap(), rhs)
            })
    })
}

proptest! {
    #[test]
    fn thomas_matches_dense_elimination((a, rhs) in spd_system()) {
        prop_assert!(a.is_spd());
        let x = a.solve(&rhs).unwrap();
        let y = dense_solve(&a, &rhs);
        let scale = y.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for (p, q) in x.iter().zip(&y) {
            prop_assert!((p - q).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn fem_matrices_are_spd(m in 2usize..200) {
        let mesh = Mesh1D::new(m).unwrap();
        for a in [assemble_mass(&mesh), assemble_stiffness(&mesh)] {
            prop_assert!(a.is_symmetric());
            prop_assert!(a.is_spd());
            prop_assert_eq!(a.dim(), m - 1);
        }
    }

    #[test]
    fn time_mode_diff_is_symmetric(v in prop::collection::vec(-1.0f64..1.0, 1..40), shift in -1.0f64..1.0) {
        let w: Vec<f64> = v.iter().map(|x| x + shift).collect();
        let h = 1.0 / (v.len() + 1) as f64;
        let d1 = discrete_l2_diff(&v, &w, RefinementMode::TimeRefined, h).unwrap();
        let d2 = discrete_l2_diff(&w, &v, RefinementMode::TimeRefined, h).unwrap();
        prop_assert_eq!(d1, d2);
        prop_assert!((d1 - (h * v.len() as f64).sqrt() * shift.abs()).abs() < 1e-12);
    }
}
