use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use entq_core::measures::report;
use entq_core::overlap::OptConfig;
use entq_cli::builtins::{parse_dims, resolve_state, BUILTIN_NAMES};
use entq_cli::error::{CliError, Result};
use entq_cli::propcheck::PropcheckConfig;
use entq_cli::{dicke, figure2, propcheck, table1};

#[derive(Parser)]
#[command(name = "entq", version, about = "Entanglement quantifiers for pure multipartite states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OptFlags {
    /// Random restarts of the overlap optimizer (restart 0 is deterministic).
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stop once a full sweep improves the overlap by less than this.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

impl OptFlags {
    fn config(&self) -> Result<OptConfig> {
        let cfg = OptConfig {
            restarts: self.restarts,
            tol: self.tol,
            seed: self.seed,
            ..OptConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the measure report of a state.
    Compute {
        #[arg(long, help = format!("Builtin name ({BUILTIN_NAMES}) or path to a JSON state file"))]
        state: String,
        /// Number of blocks; defaults to the number of subsystems.
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        opt: OptFlags,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form sweep over p as CSV.
    Figure2 {
        #[arg(long, default_value_t = 1001)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dicke-state table against reference values, as CSV plus a summary line.
    Table1 {
        #[command(flatten)]
        opt: OptFlags,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized check of the inequalities between the measures.
    Propcheck {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value = "2x2")]
        dims: String,
        /// Number of blocks; defaults to the number of subsystems.
        #[arg(long)]
        k: Option<usize>,
        /// Check this state on every trial instead of sampling.
        #[arg(long)]
        state: Option<String>,
        #[command(flatten)]
        opt: OptFlags,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimizer against the closed form for Dicke states of n qubits, as CSV.
    Dicke {
        #[arg(long)]
        n: usize,
        /// Only this number of zeros.
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        opt: OptFlags,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Text for the primary output plus an optional line for stderr.
struct Output {
    body: String,
    note: Option<String>,
}

fn emit(out: Option<&PathBuf>, output: &Output) -> Result<()> {
    match out {
        Some(path) => fs::write(path, &output.body)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{}", output.body),
    }
    if let Some(note) = &output.note {
        eprintln!("{note}");
    }
    Ok(())
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Compute { state, k, opt, out } => {
            let psi = resolve_state(&state)?;
            let k = k.unwrap_or(psi.n());
            let rep = report(&psi, k, &opt.config()?)?;
            let body = format!("scope=max_over_all_{k}_block_partitions\n{}", rep.to_record());
            emit(out.as_ref(), &Output { body, note: None })?;
            if !rep.converged {
                return Err(CliError::NonConvergence(format!("state {state}, k={k}")));
            }
            Ok(())
        }
        Command::Figure2 { steps, out } => {
            let rows = figure2::sweep(steps)?;
            emit(out.as_ref(), &Output { body: figure2::to_csv(&rows), note: None })
        }
        Command::Table1 { opt, out } => {
            let rows = table1::compute(&opt.config()?)?;
            let summary = table1::summary(&rows);
            emit(out.as_ref(), &Output { body: table1::to_csv(&rows), note: Some(summary.clone()) })?;
            if rows.iter().all(table1::Table1Row::within_tolerance) {
                Ok(())
            } else {
                Err(CliError::Violation(summary))
            }
        }
        Command::Propcheck { trials, dims, k, state, opt, out } => {
            let fixed_state = state.as_deref().map(resolve_state).transpose()?;
            let dims = match &fixed_state {
                Some(psi) => psi.dims().to_vec(),
                None => parse_dims(&dims)?,
            };
            let cfg = PropcheckConfig {
                trials,
                k: k.unwrap_or(dims.len()),
                dims,
                seed: opt.seed,
                fixed_state,
                opt: opt.config()?,
            };
            let rep = propcheck::run(&cfg)?;
            emit(out.as_ref(), &Output { body: rep.render(), note: None })?;
            if rep.hard_failure() {
                return Err(CliError::Violation("a hard inequality failed".into()));
            }
            Ok(())
        }
        Command::Dicke { n, k, opt, out } => {
            let rows = dicke::table(n, k, &opt.config()?)?;
            emit(out.as_ref(), &Output { body: dicke::to_csv(&rows), note: None })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_status() as u8)
        }
    }
}
