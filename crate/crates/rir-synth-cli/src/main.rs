mod augment;
mod config;
mod generate;
mod measure;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Exit codes are a stable contract for pipeline callers:
/// 0 success, 1 partial or runtime failure, 2 configuration error.
pub const EXIT_RUNTIME: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;

#[derive(Debug)]
pub enum CliError {
    /// Bad invocation or configuration; exits 2.
    Config(String),
    /// A failure while doing the work; exits 1.
    Runtime(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) | CliError::Runtime(msg) => write!(f, "{msg}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "rirsynth",
    version,
    about = "Generate RIR datasets, augment audio corpora and measure impulse responses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded batch of impulse responses with metadata sidecars
    Generate(generate::GenerateArgs),
    /// Convolve a directory of audio with a directory of impulse responses
    Augment(augment::AugmentArgs),
    /// Measure RT60, EDT, DRR and ITDG of impulse response files
    Measure(measure::MeasureArgs),
}

fn main() -> ExitCode {
    // progress and notices go to stderr; stdout carries machine-readable output
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();

    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(args) => generate::run(args),
        Command::Augment(args) => augment::run(args),
        Command::Measure(args) => measure::run(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            log::error!("{err}");
            ExitCode::from(err.exit_code())
        }
    }
}
