//! `sinkhorn` command-line tool.
//!
//! Exit status: 0 on success, 1 on invalid input or flags, 2 when `scale` or
//! `rc-scale` stops at the step cap without converging.

mod args;
mod commands;
mod input;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

fn run(cli: &Cli) -> anyhow::Result<u8> {
    match &cli.command {
        Command::Scale(a) => commands::scale(a),
        Command::RcScale(a) => commands::rc_scale(a),
        Command::Limit(a) => commands::limit(a),
        Command::Classify(a) => commands::classify(a),
        Command::Search(a) => commands::search(a),
        Command::Trace(a) => commands::trace(a),
    }
}

/// Piping into `head` should end the process quietly, not panic in `println!`.
fn default_sigpipe() {
    #[cfg(unix)]
    // SAFETY: called once at startup before any other thread exists.
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

fn main() -> ExitCode {
    default_sigpipe();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
