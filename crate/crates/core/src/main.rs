use std::path::PathBuf;
use std::process::ExitCode;

use anisovisc::experiment::{self, ExperimentConfig, Outcome, RunOptions};
use anisovisc::Result;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "anisovisc",
    version,
    about = "Vanishing-viscosity experiments for u_t + f(u)_y = u_xx"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment config (`section.key = value` lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output.dir`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write SVG plots.
    #[arg(long, global = true)]
    plot: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Run one viscous solve and write the final field and step log.
    Solve,
    /// Sweep epsilon and fit the convergence rate.
    Sweep,
    /// Evaluate discrete entropy residuals.
    EntropyCheck,
    /// Check mass balance, total variation and the maximum principle.
    Properties,
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| anisovisc::Error::config("--config", "a config file is required"))?;
    let cfg = ExperimentConfig::from_file(path)?;
    let opts = RunOptions {
        out: cli.out.clone(),
        plot: cli.plot,
    };
    match cli.command {
        Command::Solve => experiment::cmd_solve(&cfg, &opts),
        Command::Sweep => experiment::cmd_sweep(&cfg, &opts),
        Command::EntropyCheck => experiment::cmd_entropy_check(&cfg, &opts),
        Command::Properties => experiment::cmd_properties(&cfg, &opts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match dispatch(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.report);
            for f in &outcome.files {
                eprintln!("wrote {}", f.display());
            }
            ExitCode::from(if outcome.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(experiment::exit_code(&e) as u8)
        }
    }
}
