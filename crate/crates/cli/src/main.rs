use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pentapod_core::selfmotion::Tolerances;

mod commands;
mod error;
mod svg;

use commands::RunConfig;
use error::CliError;

/// Planar pentapod classification, elimination reports and Duporcq self-motions.
#[derive(Parser)]
#[command(name = "pentapod", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// number of samples (random directions, motion samples or profile points)
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// relative leg-residual tolerance
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_leg: f64,
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol_f0: f64,
    /// output file (CSV for motion and profile, SVG for svg, JSON otherwise)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a design against the parallel-line reconstructions
    Classify { design: PathBuf },
    /// Sample the self-motion and export the trajectory
    Motion {
        design: PathBuf,
        /// r1² (r4² = r1²); r3² is derived
        #[arg(long)]
        r1: Option<String>,
        /// r2² (r5² = r2²)
        #[arg(long)]
        r2: Option<String>,
    },
    /// Elimination report for a canonical design or raw parameters
    Pipeline { input: PathBuf },
    /// Sixth leg and architectural singularity of the completed hexapod
    HexapodCheck { design: PathBuf },
    /// Moebius profile and special-direction memberships
    Profile {
        design: PathBuf,
        /// profile the platform instead of the base
        #[arg(long)]
        platform: bool,
    },
    /// Render base and platform as SVG
    Svg { design: PathBuf },
}

fn run(cli: Cli) -> Result<(), CliError> {
    if !(cli.tol_leg > 0.0 && cli.tol_f0 > 0.0) {
        return Err(CliError::Schema("tolerances must be positive".into()));
    }
    let cfg = RunConfig { seed: cli.seed, samples: cli.samples, tol: Tolerances { leg: cli.tol_leg, f0: cli.tol_f0 }, out: cli.out };
    match &cli.cmd {
        Cmd::Classify { design } => commands::classify(&cfg, design),
        Cmd::Motion { design, r1, r2 } => commands::motion(&cfg, design, r1.as_deref(), r2.as_deref()),
        Cmd::Pipeline { input } => commands::pipeline_cmd(&cfg, input),
        Cmd::HexapodCheck { design } => commands::hexapod_check(&cfg, design),
        Cmd::Profile { design, platform } => commands::profile_cmd(&cfg, design, *platform),
        Cmd::Svg { design } => commands::svg_cmd(&cfg, design),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
