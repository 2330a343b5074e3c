use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cvdecomp::cli::{run, Command, Format, Identity, JobConfig};
use cvdecomp::solver::Family;

#[derive(Parser)]
#[command(name = "cvdecomp", version, about = "Compile bosonic Hamiltonian exponentials into elementary gates")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// TOML job file; flags given on the command line take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Hamiltonian such as "(X0^2+P0^2)^2".
    #[arg(long, global = true)]
    hamiltonian: Option<String>,
    #[arg(long, global = true)]
    hamiltonian_file: Option<PathBuf>,
    /// Interaction time.
    #[arg(long, global = true, allow_negative_numbers = true)]
    t: Option<f64>,
    /// Error budget per approximated component.
    #[arg(long, global = true)]
    budget: Option<f64>,
    /// Scheme order to use (compile) or to solve for (solve).
    #[arg(long, global = true)]
    order: Option<u32>,
    /// Splitting order, 1 or 2.
    #[arg(long, global = true)]
    split_order: Option<u32>,
    /// Fock truncation per mode.
    #[arg(long, global = true)]
    fock_dim: Option<usize>,
    /// Number of low Fock states per mode in the verified subspace.
    #[arg(long, global = true)]
    subspace: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Verification distance threshold.
    #[arg(long, global = true)]
    threshold: Option<f64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve or refine an approximation scheme.
    Solve {
        #[arg(long)]
        table: Option<String>,
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        #[arg(long)]
        pairs: Option<usize>,
        /// Fixed unknown, as NAME=VALUE; repeatable.
        #[arg(long = "pin", value_parser = parse_pin, allow_hyphen_values = true)]
        pins: Vec<(String, f64)>,
        /// Number of homotopy paths.
        #[arg(long)]
        paths: Option<usize>,
    },
    /// Compile a Hamiltonian into a gate sequence and report.
    Compile,
    /// Check an exact identity or a sequence file in a truncated Fock space.
    Verify {
        #[arg(long, value_enum)]
        identity: Option<IdentityArg>,
        #[arg(long)]
        sequence: Option<PathBuf>,
        #[arg(long, allow_negative_numbers = true)]
        k: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
    },
    /// Print the shipped coefficient tables with residuals.
    Tables {
        #[arg(long)]
        which: Option<String>,
    },
    /// Compare compiled and naive operation counts.
    Count,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Commutator,
    Nested,
}

#[derive(Clone, Copy, ValueEnum)]
enum IdentityArg {
    X2,
    Pdc,
    Fourier,
    Conjugation,
}

fn parse_pin(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got {s}"))?;
    let value: f64 = value.trim().parse().map_err(|e| format!("{name}: {e}"))?;
    Ok((name.trim().to_owned(), value))
}

fn build_config(cli: Cli) -> Result<JobConfig, cvdecomp::cli::CliError> {
    let command = match &cli.command {
        Cmd::Solve { .. } => Command::Solve,
        Cmd::Compile => Command::Compile,
        Cmd::Verify { .. } => Command::Verify,
        Cmd::Tables { .. } => Command::Tables,
        Cmd::Count => Command::Count,
    };
    let c = cli.common;
    let mut config = match &c.config {
        Some(path) => JobConfig::load(path)?,
        None => JobConfig::new(command),
    };
    config.command = command;
    if c.hamiltonian.is_some() {
        config.hamiltonian = c.hamiltonian;
        config.hamiltonian_file = None;
    }
    if c.hamiltonian_file.is_some() {
        config.hamiltonian_file = c.hamiltonian_file;
    }
    config.t = c.t.unwrap_or(config.t);
    config.budget = c.budget.unwrap_or(config.budget);
    config.order = c.order.or(config.order);
    config.split_order = c.split_order.unwrap_or(config.split_order);
    config.fock_dim = c.fock_dim.or(config.fock_dim);
    config.subspace = c.subspace.unwrap_or(config.subspace);
    config.seed = c.seed.unwrap_or(config.seed);
    config.out = c.out.or(config.out);
    config.threshold = c.threshold.unwrap_or(config.threshold);
    if let Some(f) = c.format {
        config.format = match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        };
    }
    match cli.command {
        Cmd::Solve { table, family, pairs, pins, paths } => {
            config.table = table.or(config.table);
            if let Some(f) = family {
                config.family = Some(match f {
                    FamilyArg::Commutator => Family::Commutator,
                    FamilyArg::Nested => Family::Nested,
                });
            }
            config.pairs = pairs.or(config.pairs);
            config.pins.extend(pins);
            config.paths = paths.unwrap_or(config.paths);
        }
        Cmd::Verify { identity, sequence, k, alpha } => {
            if let Some(id) = identity {
                config.identity = Some(match id {
                    IdentityArg::X2 => Identity::X2,
                    IdentityArg::Pdc => Identity::Pdc,
                    IdentityArg::Fourier => Identity::Fourier,
                    IdentityArg::Conjugation => Identity::Conjugation,
                });
            }
            config.sequence = sequence.or(config.sequence);
            config.k = k.or(config.k);
            config.alpha = alpha.or(config.alpha);
        }
        Cmd::Tables { which } => config.which = which.or(config.which),
        Cmd::Compile | Cmd::Count => {}
    }
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = build_config(cli).and_then(|config| run(&config));
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
