mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Failure;

/// Tree traversal recurses once per level, up to the longest left object.
const WORKER_STACK: usize = 512 << 20;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .init();

    let worker = std::thread::Builder::new()
        .name("setjoin".into())
        .stack_size(WORKER_STACK)
        .spawn(move || run(cli.command));
    let result = match worker {
        Ok(handle) => handle.join().unwrap_or_else(|_| Err(Failure::Internal("worker panicked".into()))),
        Err(e) => Err(Failure::Internal(format!("cannot start worker: {e}"))),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Join(c) => commands::join(c),
        Command::Bench(c) => commands::bench(c),
        Command::Generate(c) => commands::generate(c),
        Command::Stats(c) => commands::stats(c),
        Command::EstimateLimit(c) => commands::estimate(c),
        Command::Calibrate(c) => commands::calibrate(c),
        Command::Oracle(c) => commands::oracle(c),
    }
}
