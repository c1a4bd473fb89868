//! Experiment orchestration behind the `msd` command-line tool.

pub mod config;
pub mod table;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fem1d::{discrete_l2_diff, RefinementMode};
use crate::reference::figure1_profiles;
use crate::stepper::{solve, solve_with_weights, SolutionHistory};
use crate::weights::assemble_weights;

pub use config::{ExperimentConfig, ExperimentKind, OutputFormat};
pub use table::{RateRow, RateTable, StudyKind};

/// Rendered output of one experiment plus whether any solve failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub solver_failed: bool,
}

/// Temporal self-convergence at fixed `m_cells`. Row `j` is labelled with
/// `N_j = n_steps * 2^j` and compares the final snapshots for `N_j / 2` and
/// `N_j` steps, so the first row of the default run reads `N = 128`.
pub fn run_convergence_time(cfg: &ExperimentConfig) -> Result<RateTable> {
    check_levels(cfg)?;
    if !cfg.n_steps.is_multiple_of(2) {
        return Err(Error::Config("convergence-time needs an even n_steps".into()));
    }
    let counts: Vec<usize> = (0..=cfg.levels).map(|j| (cfg.n_steps / 2) << j).collect();
    let solver_cfgs = counts
        .iter()
        .map(|&n| cfg.solver_config(n, cfg.m_cells))
        .collect::<Result<Vec<_>>>()?;
    // Bad input fails the whole study; step failures only mark their level.
    solver_cfgs[0].validate()?;
    let finals: Vec<Result<SolutionHistory>> = solver_cfgs.par_iter().map(solve).collect();

    let h = 1.0 / cfg.m_cells as f64;
    let errors: Vec<(usize, Option<f64>)> = (0..cfg.levels)
        .map(|j| {
            let e = match (&finals[j], &finals[j + 1]) {
                (Ok(coarse), Ok(fine)) => discrete_l2_diff(
                    coarse.final_snapshot(),
                    fine.final_snapshot(),
                    RefinementMode::TimeRefined,
                    h,
                )
                .ok(),
                _ => None,
            };
            (counts[j + 1], e)
        })
        .collect();
    Ok(RateTable::from_errors(
        StudyKind::Time,
        cfg.exponent.label(),
        cfg.initial.label(),
        format!("M={}", cfg.m_cells),
        &errors,
    ))
}

/// Spatial self-convergence at fixed `n_steps`. Row `j` is labelled with
/// `M_j = m_cells * 2^j` and compares `M_j / 2` with `M_j` cells, coarse node
/// `i` against fine node `2i`, weighted by the fine `h = 1 / M_j`.
pub fn run_convergence_space(cfg: &ExperimentConfig) -> Result<RateTable> {
    check_levels(cfg)?;
    if !cfg.m_cells.is_multiple_of(2) || cfg.m_cells < 4 {
        return Err(Error::Config("convergence-space needs an even m_cells >= 4".into()));
    }
    let cells: Vec<usize> = (0..=cfg.levels).map(|j| (cfg.m_cells / 2) << j).collect();
    let solver_cfgs = cells
        .iter()
        .map(|&m| cfg.solver_config(cfg.n_steps, m))
        .collect::<Result<Vec<_>>>()?;
    solver_cfgs[0].validate()?;
    let weights = assemble_weights(cfg.n_steps, solver_cfgs[0].tau(), &solver_cfgs[0].exponent)?;
    let finals: Vec<Result<SolutionHistory>> = solver_cfgs
        .par_iter()
        .map(|c| solve_with_weights(c, &weights))
        .collect();

    let errors: Vec<(usize, Option<f64>)> = (0..cfg.levels)
        .map(|j| {
            let h = 1.0 / cells[j + 1] as f64;
            let e = match (&finals[j], &finals[j + 1]) {
                (Ok(coarse), Ok(fine)) => discrete_l2_diff(
                    coarse.final_snapshot(),
                    fine.final_snapshot(),
                    RefinementMode::SpaceRefined,
                    h,
                )
                .ok(),
                _ => None,
            };
            (cells[j + 1], e)
        })
        .collect();
    Ok(RateTable::from_errors(
        StudyKind::Space,
        cfg.exponent.label(),
        cfg.initial.label(),
        format!("N={}", cfg.n_steps),
        &errors,
    ))
}

fn check_levels(cfg: &ExperimentConfig) -> Result<()> {
    if cfg.levels < 2 {
        return Err(Error::Config("convergence studies need levels >= 2".into()));
    }
    if cfg.levels > 16 {
        return Err(Error::Config("at most 16 refinement levels are supported".into()));
    }
    Ok(())
}

fn num(v: f64) -> String {
    format!("{v}")
}

/// Runs the experiment described by `cfg` and renders its output.
pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    match cfg.kind {
        ExperimentKind::ConvergenceTime | ExperimentKind::ConvergenceSpace => {
            let table = if cfg.kind == ExperimentKind::ConvergenceTime {
                run_convergence_time(cfg)?
            } else {
                run_convergence_space(cfg)?
            };
            Ok(Report {
                text: table.emit(cfg.format),
                solver_failed: table.has_failures(),
            })
        }
        ExperimentKind::Solve => {
            let hist = solve(&cfg.solver_config(cfg.n_steps, cfg.m_cells)?)?;
            let m = cfg.m_cells;
            let last = hist.final_snapshot();
            let rows: Vec<Vec<String>> = (0..=m)
                .map(|j| {
                    let v = if j == 0 || j == m { 0.0 } else { last[j - 1] };
                    vec![num(j as f64 / m as f64), num(v)]
                })
                .collect();
            Ok(Report {
                text: table::emit_columns(&["x", "value"], &rows, cfg.format),
                solver_failed: false,
            })
        }
        ExperimentKind::Figure1 => {
            let alpha_t = match cfg.exponent {
                config::ExponentSpec::Figure1 { alpha_t } => alpha_t,
                _ => {
                    return Err(Error::Config(
                        "figure1 uses the exp-figure1 exponent; set alpha_t instead".into(),
                    ))
                }
            };
            if let Some(bar) = cfg.alpha_bar {
                if bar != alpha_t {
                    return Err(Error::Config("figure1 compares against alpha_bar = alpha_t".into()));
                }
            }
            let s = figure1_profiles(cfg.t_final, alpha_t, cfg.n_steps, cfg.m_cells)?;
            let rows: Vec<Vec<String>> = (0..s.times.len())
                .map(|i| {
                    vec![
                        num(s.times[i]),
                        num(s.heat[i]),
                        num(s.multiscale[i]),
                        num(s.subdiffusion[i]),
                    ]
                })
                .collect();
            Ok(Report {
                text: table::emit_columns(&["t", "heat", "multiscale", "subdiffusion"], &rows, cfg.format),
                solver_failed: false,
            })
        }
        ExperimentKind::WeightsDump => {
            let exponent = cfg.exponent.build(cfg.t_final)?;
            let tau = cfg.t_final / cfg.n_steps as f64;
            let table = assemble_weights(cfg.n_steps, tau, &exponent)?;
            let rows: Vec<Vec<String>> = table
                .entries()
                .map(|(n, k, b)| vec![n.to_string(), k.to_string(), num(b)])
                .collect();
            Ok(Report {
                text: table::emit_columns(&["n", "k", "b"], &rows, cfg.format),
                solver_failed: false,
            })
        }
    }
}
