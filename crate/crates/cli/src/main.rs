mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;
use log::LevelFilter;

use args::{Cli, Command};
use commands::CliError;

const EXIT_USAGE: u8 = 2;
const EXIT_FORMAT: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

fn init_logging() {
    let level = match std::env::var("MANHATTAN_LOG").as_deref() {
        Ok("quiet") => LevelFilter::Off,
        Ok("debug") => LevelFilter::Debug,
        Ok("info") => LevelFilter::Info,
        _ => LevelFilter::Warn,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .init();
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<CliError>() {
        return match e {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Verification(_) => EXIT_NUMERICAL,
        };
    }
    if let Some(e) = err.downcast_ref::<manhattan::Error>() {
        use manhattan::Error::*;
        return match e {
            Format(_) | Io(_) => EXIT_FORMAT,
            NumericalFailure(_) | InconsistentSamples { .. } => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        };
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return EXIT_FORMAT;
    }
    EXIT_USAGE
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    init_logging();
    let result = match &cli.command {
        Command::Info(a) => commands::info(a),
        Command::Generate(a) => commands::generate(a),
        Command::Bandlimit(a) => commands::bandlimit_cmd(a),
        Command::Sample(a) => commands::sample(a),
        Command::Reconstruct(a) => commands::reconstruct_cmd(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Mask(a) => commands::mask(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
