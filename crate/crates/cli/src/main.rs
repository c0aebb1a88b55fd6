use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, ValueEnum};
use qline_bqc::analysis::{run_subcommand, ExperimentConfig, Mode, Subcommand};
use qline_bqc::Execution;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    /// Output distributions, distances and confusion matrices.
    Correctness,
    /// Averaged server-side states for the three blindness grids.
    Blindness,
    /// Exhaustive real/ideal view comparison and angle uniformity.
    Security,
    /// Feed-forward logic, optical chains and timing budget.
    HwCheck,
    /// Bell parameter of the ideal and noisy source states.
    Chsh,
}

impl From<Command> for Subcommand {
    fn from(c: Command) -> Self {
        match c {
            Command::Correctness => Subcommand::Correctness,
            Command::Blindness => Subcommand::Blindness,
            Command::Security => Subcommand::Security,
            Command::HwCheck => Subcommand::HwCheck,
            Command::Chsh => Subcommand::Chsh,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Ideal,
    Noisy,
    Sampled,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Ideal => Mode::Ideal,
            ModeArg::Noisy => Mode::Noisy,
            ModeArg::Sampled => Mode::Sampled,
        }
    }
}

/// Deterministic experiments on the multi-client blind computation simulator.
#[derive(Debug, Parser)]
#[command(name = "qline", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// TOML file with experiment settings; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Directory for report files (created if missing).
    #[arg(long, default_value = "qline-out")]
    out: PathBuf,
    /// Run on one thread.
    #[arg(long)]
    sequential: bool,
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            ExperimentConfig::from_toml(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(shots) = cli.shots {
        cfg.shots = shots;
    }
    if let Some(mode) = cli.mode {
        cfg.mode = mode.into();
    }
    cfg.validate().context("invalid settings")?;
    Ok(cfg)
}

// Each file goes to a temporary sibling first and is renamed into place.
fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    let mut f = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
    f.write_all(contents.as_bytes())?;
    f.sync_all()?;
    fs::rename(&tmp, &target).with_context(|| format!("writing {}", target.display()))?;
    Ok(target)
}

fn run(cli: &Cli) -> Result<bool> {
    let cfg = load_config(cli)?;
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let output = run_subcommand(cli.command.into(), &cfg, exec)?;
    fs::create_dir_all(&cli.out).with_context(|| format!("creating {}", cli.out.display()))?;
    for (name, contents) in &output.files {
        let path = write_atomic(&cli.out, name, contents)?;
        println!("wrote {}", path.display());
    }
    println!("{}", output.summary);
    Ok(output.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
