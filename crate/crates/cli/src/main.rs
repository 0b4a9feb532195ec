use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

mod commands;

use commands::Cli;

/// Malformed arguments or input documents.
pub const EXIT_USAGE: u8 = 64;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("syzygy: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
