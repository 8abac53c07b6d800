use std::path::PathBuf;
use std::process::ExitCode;

use amvlab_cli::{exit, Context, Failure};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "amvlab", version, about = "Asymptotic mean value experiments")]
struct Cli {
    /// Seed for every stochastic scheme (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for JSON and CSV bundles.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Absolute gap allowed between measured and predicted limits.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every experiment in a config.
    Run { config: PathBuf },
    /// Run the verify experiments and compare against closed forms.
    Verify { config: PathBuf },
    /// List the available fields, weights, distances and graph presets.
    Catalog,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::CONFIG as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}

fn run(cli: Cli) -> Result<i32, Failure> {
    if let Some(t) = cli.tolerance {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Failure::config(format!("--tolerance must be a non-negative number, got {t}")));
        }
    }
    let threads = amvlab_cli::thread_count(std::env::var("AMVLAB_THREADS").ok().as_deref())?;
    let ctx = Context { seed: cli.seed, tolerance: cli.tolerance };
    let (path, verify_only) = match cli.command {
        Command::Catalog => {
            print!("{}", amvlab_cli::catalog());
            return Ok(exit::OK);
        }
        Command::Run { config } => (config, false),
        Command::Verify { config } => (config, true),
    };
    let mut entries = amvlab_cli::load(&path)?;
    if verify_only {
        entries.retain(|e| amvlab_cli::tasks::is_verify(&e.experiment));
        if entries.is_empty() {
            return Err(Failure::config(format!("{} has no verify experiments", path.display())));
        }
    }
    let report = amvlab_cli::execute(&entries, &ctx, &cli.out_dir, threads)?;
    for l in &report.lines {
        println!("{l}");
    }
    if report.failed_verifications > 0 {
        eprintln!("{} verification(s) failed", report.failed_verifications);
        return Ok(exit::VERIFY_FAILED);
    }
    Ok(exit::OK)
}
