//! `rbf-weno`: single runs, convergence studies and scheme comparisons.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rbf_weno::config::{RunConfig, SchemeId};
use rbf_weno::harness::{compare_schemes, convergence_study, run_case, Metadata};

const EXIT_SOLVER: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] rbf_weno::Error),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) if e.is_usage() => EXIT_USAGE,
            _ => EXIT_SOLVER,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "rbf-weno", version, about = "Finite-volume RBF-WENO solvers for 1D conservation laws")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one case and write its solution profile.
    Run {
        #[command(flatten)]
        common: CommonArgs,
        /// Also write the per-step log to this file.
        #[arg(long)]
        step_log: Option<PathBuf>,
    },
    /// Run a grid-convergence study against the exact solution.
    Converge {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated cell counts.
        #[arg(long, value_delimiter = ',', default_value = "20,40,80,160,320")]
        resolutions: Vec<usize>,
        /// Scale the time step with dx^2 so time errors stay below spatial ones.
        #[arg(long, value_enum, default_value_t = Switch::On)]
        dt_cap: Switch,
    },
    /// Run several schemes on the same grid and write side-by-side profiles.
    Compare {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated scheme ids; the classical WENO baseline is always added.
        #[arg(long, value_delimiter = ',', default_value = "rbf_weno_p1,rbf_weno_p2")]
        schemes: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

impl Switch {
    fn as_str(self) -> &'static str {
        match self {
            Switch::On => "on",
            Switch::Off => "off",
        }
    }
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Flat `key = value` file applied before the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Problem id.
    #[arg(long)]
    problem: Option<String>,
    /// Scheme id: weno_js5, rbf_weno_p1, rbf_weno_p2, hybrid_rbf_weno.
    #[arg(long)]
    scheme: Option<String>,
    /// Numerical flux: hllc, lax_friedrichs, godunov_pressureless.
    #[arg(long)]
    flux: Option<String>,
    /// Number of cells.
    #[arg(long)]
    n: Option<usize>,
    /// CFL number.
    #[arg(long)]
    cfl: Option<f64>,
    /// Final time.
    #[arg(long)]
    tfinal: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Order of the shape-parameter estimate.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    p: Option<u8>,
    /// Hybrid smooth/WENO dispatch.
    #[arg(long, value_enum)]
    hybrid: Option<Switch>,
    /// Any other configuration key, as `key=value`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    extra: Vec<String>,
}

impl CommonArgs {
    fn config(&self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
            cfg.apply_text(&text)?;
        }
        let n = self.n.map(|v| v.to_string());
        let cfl = self.cfl.map(|v| v.to_string());
        let tfinal = self.tfinal.map(|v| v.to_string());
        let p = self.p.map(|v| v.to_string());
        let flags = [
            ("problem", self.problem.as_deref()),
            ("scheme", self.scheme.as_deref()),
            ("flux", self.flux.as_deref()),
            ("n_cells", n.as_deref()),
            ("cfl", cfl.as_deref()),
            ("t_final", tfinal.as_deref()),
            ("p", p.as_deref()),
            ("hybrid", self.hybrid.map(Switch::as_str)),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        for kv in &self.extra {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--set expects key=value, got `{kv}`")))?;
            cfg.set(k.trim(), v.trim())?;
        }
        if let Some(out) = &self.out {
            cfg.out = Some(out.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn metadata() -> Metadata {
    Metadata {
        commit: env!("RBF_WENO_COMMIT").to_string(),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `text` to the configured output, or standard output.
fn emit(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(cmd: Command) -> Result<(), CliError> {
    let meta = metadata();
    match cmd {
        Command::Run { common, step_log } => {
            let cfg = common.config()?;
            let out = run_case(&cfg)?;
            emit(&cfg, &out.profile_csv(&meta))?;
            if let Some(path) = step_log {
                write_file(&path, &out.step_log_csv())?;
            }
            eprintln!("{}", out.summary());
        }
        Command::Converge {
            common,
            resolutions,
            dt_cap,
        } => {
            let mut cfg = common.config()?;
            cfg.dt_cap = dt_cap == Switch::On;
            let report = convergence_study(&cfg, &resolutions)?;
            if cfg.out.is_some() {
                emit(&cfg, &report.to_csv(&cfg, &meta))?;
                print!("{}", report.to_table());
            } else {
                print!("{}", report.to_csv(&cfg, &meta));
                eprint!("{}", report.to_table());
            }
        }
        Command::Compare { common, schemes } => {
            let cfg = common.config()?;
            let ids = schemes
                .iter()
                .map(|s| s.parse::<SchemeId>())
                .collect::<rbf_weno::Result<Vec<_>>>()?;
            let cmp = compare_schemes(&cfg, &ids)?;
            emit(&cfg, &cmp.to_csv(&meta))?;
            for o in &cmp.outputs {
                eprintln!("{}", o.summary());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
