use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use segstat::commands::{compare, evaluate, fuse, render, split};
use segstat::{CliError, Context, PipelineConfig, Result};

#[derive(Parser)]
#[command(
    name = "segstat",
    version,
    about = "Score, compare and fuse segmentation masks of two training regimes"
)]
struct Cli {
    /// Pipeline configuration file.
    #[arg(long, global = true, default_value = "segstat.toml")]
    config: PathBuf,
    /// Overrides split.seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Restricts split-dependent commands to one split (1-based).
    #[arg(long, global = true)]
    split_index: Option<u32>,
    /// Worker threads; falls back to SEGSTAT_JOBS, then 1.
    #[arg(long, global = true, env = "SEGSTAT_JOBS")]
    jobs: Option<usize>,
    /// Overrides output.dir.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write seeded train/test manifests and the class report.
    Split,
    /// Write the nested depletion stages of each split.
    Deplete,
    /// Score every selected image for both models.
    Evaluate,
    /// Compare the two models on one or more metric files.
    Compare {
        /// Metric CSVs; defaults to the evaluate output.
        metrics: Vec<PathBuf>,
    },
    /// Fuse the aggregated masks of both models.
    Fuse,
    /// Write overlays, averaged heatmaps and plot data.
    Render,
}

fn run(cli: Cli) -> Result<Vec<PathBuf>> {
    let mut ctx = Context::new(PipelineConfig::load(&cli.config)?);
    if let Some(seed) = cli.seed {
        ctx.seed = seed;
    }
    if let Some(out) = cli.output {
        ctx.output = out;
    }
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Input("--jobs must be positive".into()));
        }
        ctx.jobs = jobs;
    }
    if let Some(i) = cli.split_index {
        if i == 0 || i > ctx.config.split_count {
            return Err(CliError::Input(format!(
                "--split-index must lie in 1..={}",
                ctx.config.split_count
            )));
        }
        ctx.split_index = Some(i);
    }
    match cli.command {
        Command::Split => split::split(&ctx),
        Command::Deplete => split::deplete_splits(&ctx),
        Command::Evaluate => evaluate::evaluate(&ctx),
        Command::Compare { metrics } => compare::compare(&ctx, &metrics),
        Command::Fuse => fuse::fuse(&ctx),
        Command::Render => render::render(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(written) => {
            for path in written {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
