use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use msd_core::harness::{self, ExperimentConfig, ExperimentKind};
use msd_core::Error;

#[derive(Parser, Debug)]
#[command(name = "msd", version, about = "Multiscale diffusion solver and convergence harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve once and print the final-time nodal values.
    Solve(Options),
    /// Temporal self-convergence study at fixed mesh.
    ConvergenceTime(Options),
    /// Spatial self-convergence study at fixed step.
    ConvergenceSpace(Options),
    /// Heat, multiscale and subdiffusion curves at x = 0.5.
    Figure1(Options),
    /// Memory weights as `n,k,b`.
    WeightsDump(Options),
}

#[derive(Args, Debug, Default)]
struct Options {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or markdown.
    #[arg(long)]
    format: Option<String>,
    /// exp-example1 | exp-example2 | exp-figure1 | zero | table
    #[arg(long)]
    exponent: Option<String>,
    #[arg(long)]
    alpha_t: Option<String>,
    /// Two-column `t,alpha` CSV for `--exponent table`.
    #[arg(long)]
    exponent_table: Option<String>,
    /// sin-pi | poly-x2-1mx2 | custom-table
    #[arg(long)]
    u0: Option<String>,
    /// Two-column `x,u0` CSV for `--u0 custom-table`.
    #[arg(long)]
    u0_table: Option<String>,
    /// zero | const:<c> | sin-pi:<c>
    #[arg(long)]
    source: Option<String>,
    #[arg(long)]
    t_final: Option<String>,
    #[arg(long)]
    n_steps: Option<String>,
    #[arg(long)]
    m_cells: Option<String>,
    #[arg(long)]
    levels: Option<String>,
    #[arg(long)]
    alpha_bar: Option<String>,
}

impl Options {
    fn overrides(&self) -> Vec<(String, String)> {
        let pairs = [
            ("format", &self.format),
            ("exponent", &self.exponent),
            ("alpha_t", &self.alpha_t),
            ("exponent_table", &self.exponent_table),
            ("u0", &self.u0),
            ("u0_table", &self.u0_table),
            ("source", &self.source),
            ("t_final", &self.t_final),
            ("n_steps", &self.n_steps),
            ("m_cells", &self.m_cells),
            ("levels", &self.levels),
            ("alpha_bar", &self.alpha_bar),
        ];
        let mut out: Vec<(String, String)> = pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect();
        if let Some(p) = &self.out {
            out.push(("output".into(), p.display().to_string()));
        }
        out
    }
}

const EXIT_INVALID: u8 = 2;
const EXIT_SOLVER: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    if e.is_solver_failure() {
        EXIT_SOLVER
    } else {
        EXIT_INVALID
    }
}

fn run(kind: ExperimentKind, opts: &Options) -> Result<bool, Error> {
    let overrides = opts.overrides();
    let cfg = match &opts.config {
        Some(path) => ExperimentConfig::from_file(kind, path, &overrides)?,
        None => ExperimentConfig::from_sources(kind, None, &overrides)?,
    };
    let report = harness::run(&cfg)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, &report.text).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => print!("{}", report.text),
    }
    Ok(report.solver_failed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, opts) = match &cli.command {
        Command::Solve(o) => (ExperimentKind::Solve, o),
        Command::ConvergenceTime(o) => (ExperimentKind::ConvergenceTime, o),
        Command::ConvergenceSpace(o) => (ExperimentKind::ConvergenceSpace, o),
        Command::Figure1(o) => (ExperimentKind::Figure1, o),
        Command::WeightsDump(o) => (ExperimentKind::WeightsDump, o),
    };
    match run(kind, opts) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("msd: one or more solves failed");
            ExitCode::from(EXIT_SOLVER)
        }
        Err(e) => {
            eprintln!("msd: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
