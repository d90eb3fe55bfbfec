use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod failure;

/// Block operator perturbation toolkit: Riccati solutions, subspace angles,
/// bound checks and spectral enclosures.
#[derive(Debug, Parser)]
#[command(name = "krein", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Base seed of randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Check tolerance: slack floor for bounds, equality tolerance for `examples`.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve, measure angles, check every bound and the spectral enclosure of an instance file.
    Analyze {
        instance: PathBuf,
    },
    /// Check the three sharp witness instances.
    Examples {
        /// Same as `--format json`.
        #[arg(long)]
        json: bool,
    },
    /// Run the bound suite over random instances; one CSV row per trial and bound.
    Ensemble {
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// Block dimensions `n0,n1`.
        #[arg(long, default_value = "4,4", value_parser = parse_dims)]
        dims: (usize, usize),
        /// Ratio `||V|| / d`.
        #[arg(long, default_value_t = 0.25)]
        v_over_d: f64,
        #[arg(long, default_value = "subordinated")]
        disposition: String,
        /// Accept `1/pi <= v_over_d < 1/2`, where only part of the catalogue applies.
        #[arg(long)]
        allow_gap_only: bool,
    },
    /// Truncated harmonic oscillator with an odd imaginary potential.
    Oscillator {
        #[arg(long, default_value_t = 0.2)]
        beta: f64,
        /// Number of Hermite modes.
        #[arg(long, default_value_t = 64)]
        m: usize,
        /// `sin`, or a path to a JSON list of `[x, b(x)]` pairs.
        #[arg(long, default_value = "sin")]
        profile: String,
        /// Quadrature nodes; defaults to `4 m + 50`.
        #[arg(long)]
        quad_nodes: Option<usize>,
    },
    /// Sample the quadratic numerical range of an instance.
    Qnr {
        instance: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected n0,n1")?;
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((parse(a)?, parse(b)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = &cli.common;
    let result = match cli.command {
        Command::Analyze { instance } => commands::analyze(&instance, common),
        Command::Examples { json } => commands::examples(json, common),
        Command::Ensemble { trials, dims, v_over_d, disposition, allow_gap_only } => {
            commands::ensemble(trials, dims, v_over_d, &disposition, allow_gap_only, common)
        }
        Command::Oscillator { beta, m, profile, quad_nodes } => commands::oscillator(beta, m, &profile, quad_nodes, common),
        Command::Qnr { instance, samples } => commands::qnr(&instance, samples, common),
    };
    match result {
        Ok(passed) => ExitCode::from(if passed { 0 } else { 1 }),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
