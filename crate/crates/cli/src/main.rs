//! `srpt`: scans of the flux-biased Josephson circuit.
//!
//! Exit codes: 0 success, 1 numerical non-convergence (or a failed
//! validation check), 2 configuration error.

// `!(x > 0.0)` is used on purpose so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;
mod validate;

use clap::{Args, Parser, Subcommand};
use config::{Format, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Numerical(_) => 1,
            CliError::Config(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<srpt_core::Error> for CliError {
    fn from(e: srpt_core::Error) -> Self {
        use srpt_core::Error as E;
        match e {
            E::InvalidParameter(_) | E::DimensionMismatch { .. } | E::InvalidTemperature(_) | E::BasisTooLarge { .. } => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("output: {e}"))
    }
}

#[derive(Parser, Debug)]
#[command(name = "srpt", version, about = "Superradiant phase transition in a flux-biased Josephson circuit")]
struct Cli {
    /// Flat `key = value unit` configuration file
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file (default: stdout)
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    format: Option<String>,
    /// Worker threads for parallel scans (default: all cores)
    #[arg(long, global = true, value_name = "K")]
    threads: Option<usize>,
    /// Seed for the Lanczos start vectors
    #[arg(long, global = true, value_name = "S")]
    seed: Option<u64>,
    /// Override a configuration entry, e.g. --set "L_g = 0.5 nH" (repeatable)
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

/// `L_R0` axis in nH.
#[derive(Args, Debug, Default)]
struct InductanceAxis {
    #[arg(long, value_name = "nH")]
    lr0_min: Option<f64>,
    #[arg(long, value_name = "nH")]
    lr0_max: Option<f64>,
    #[arg(long, value_name = "COUNT")]
    lr0_steps: Option<usize>,
}

/// Temperature axis as `k_B·T/h` in GHz.
#[derive(Args, Debug, Default)]
struct TemperatureAxis {
    #[arg(long, value_name = "GHz")]
    t_min: Option<f64>,
    #[arg(long, value_name = "GHz")]
    t_max: Option<f64>,
    #[arg(long, value_name = "COUNT")]
    t_steps: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Constrained inductive energy U/(N·E_J) versus 2πφ/Φ0
    Classical {
        /// L_R0/L_J of each curve
        #[arg(long, value_delimiter = ',')]
        ratios: Option<Vec<f64>>,
        /// Phase points per curve (1 gives φ = 0 only)
        #[arg(long)]
        points: Option<usize>,
        /// Half-width of the phase window in rad
        #[arg(long, value_name = "RAD")]
        phase_max: Option<f64>,
        #[command(flatten)]
        axis: InductanceAxis,
    },
    /// Linearized frequencies, coupling and the bosonized lower polariton
    Linear {
        #[command(flatten)]
        axis: InductanceAxis,
    },
    /// Mean-field amplitude over an (L_R0, T) grid
    Meanfield {
        #[command(flatten)]
        axis: InductanceAxis,
        #[command(flatten)]
        temps: TemperatureAxis,
        /// Atomic Fock truncation
        #[arg(long, value_name = "M")]
        dim: Option<usize>,
        /// Also write the T_c(L_R0) boundary table here
        #[arg(long, value_name = "PATH")]
        boundary: Option<PathBuf>,
    },
    /// Fluctuation spectrum and zero-point shift at T = 0
    Fluct {
        #[command(flatten)]
        axis: InductanceAxis,
        #[arg(long, value_name = "M")]
        dim: Option<usize>,
    },
    /// Exact diagonalization for a few atoms
    Ed {
        #[command(flatten)]
        axis: InductanceAxis,
        /// Atom counts
        #[arg(long = "n-atoms", value_delimiter = ',', value_name = "N")]
        n_atoms: Option<Vec<usize>>,
        #[arg(long)]
        per_mode: Option<usize>,
        #[arg(long)]
        total: Option<usize>,
        /// Full cosine junction energy instead of the quartic expansion
        #[arg(long)]
        cosine: bool,
        /// Even-sector eigenvalues to converge
        #[arg(long)]
        eigenvalues: Option<usize>,
        /// Add mean-field columns at the same L_R0
        #[arg(long)]
        compare: bool,
        /// Debug: write every sector Hamiltonian (Matrix Market, h·GHz) into DIR
        #[arg(long, value_name = "DIR")]
        dump_matrix: Option<PathBuf>,
    },
    /// Runs the invariant checks and reports PASS/FAIL per check
    Validate {
        /// Comma-separated subset of checks
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<String>>,
        /// Test hook: corrupt the named check so that it must fail
        #[arg(long, hide = true, value_name = "CHECK")]
        inject_fault: Option<String>,
    },
}

fn push_axis(o: &mut Vec<String>, a: &InductanceAxis) {
    if let Some(x) = a.lr0_min {
        o.push(format!("L_R0_min={x} nH"));
    }
    if let Some(x) = a.lr0_max {
        o.push(format!("L_R0_max={x} nH"));
    }
    if let Some(n) = a.lr0_steps {
        o.push(format!("L_R0_steps={n}"));
    }
}

/// Translates subcommand flags into configuration overrides so that they go
/// through the same parsing and validation as the file.
fn flag_overrides(cmd: &Command) -> Vec<String> {
    let mut o = Vec::new();
    match cmd {
        Command::Classical { ratios, points, phase_max, axis } => {
            if let Some(r) = ratios {
                let r: Vec<String> = r.iter().map(f64::to_string).collect();
                o.push(format!("L_R0_over_L_J={}", r.join(",")));
            }
            if let Some(p) = points {
                o.push(format!("phase_points={p}"));
            }
            if let Some(p) = phase_max {
                o.push(format!("phase_max={p} rad"));
            }
            push_axis(&mut o, axis);
        }
        Command::Linear { axis } | Command::Fluct { axis, dim: None } => push_axis(&mut o, axis),
        Command::Fluct { axis, dim: Some(m) } => {
            push_axis(&mut o, axis);
            o.push(format!("M={m}"));
        }
        Command::Meanfield { axis, temps, dim, .. } => {
            push_axis(&mut o, axis);
            if let Some(x) = temps.t_min {
                o.push(format!("T_min={x} GHz"));
            }
            if let Some(x) = temps.t_max {
                o.push(format!("T_max={x} GHz"));
            }
            if let Some(n) = temps.t_steps {
                o.push(format!("T_steps={n}"));
            }
            if let Some(m) = dim {
                o.push(format!("M={m}"));
            }
        }
        Command::Ed { axis, n_atoms, per_mode, total, cosine, eigenvalues, .. } => {
            push_axis(&mut o, axis);
            if let Some(n) = n_atoms {
                let n: Vec<String> = n.iter().map(usize::to_string).collect();
                o.push(format!("N={}", n.join(",")));
            }
            if let Some(p) = per_mode {
                o.push(format!("per_mode={p}"));
            }
            if let Some(t) = total {
                o.push(format!("total={t}"));
            }
            if *cosine {
                o.push("quartic=false".into());
            }
            if let Some(k) = eigenvalues {
                o.push(format!("eigenvalues={k}"));
            }
        }
        Command::Validate { .. } => {}
    }
    o
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    for o in &cli.overrides {
        cfg.apply_override(o)?;
    }
    for o in flag_overrides(&cli.command) {
        cfg.apply_override(&o)?;
    }
    if let Some(f) = &cli.format {
        cfg.format = f.parse::<Format>().map_err(CliError::Config)?;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(p) = &cli.out {
        cfg.out = Some(p.display().to_string());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = load_config(&cli)?;
    if let Some(k) = cli.threads {
        if k == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let out = commands::open_output(cfg.out.as_deref())?;
    match cli.command {
        Command::Classical { .. } => commands::classical(&cfg, out),
        Command::Linear { .. } => commands::linear(&cfg, out),
        Command::Meanfield { boundary, .. } => commands::meanfield(&cfg, out, boundary.as_deref()),
        Command::Fluct { .. } => commands::fluct(&cfg, out),
        Command::Ed { compare, dump_matrix, .. } => commands::ed(&cfg, out, compare, dump_matrix.as_deref()),
        Command::Validate { only, inject_fault } => validate::run(&cfg, out, only.as_deref(), inject_fault.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("srpt: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
