use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use fracspec_cli::{execute, Cli, Status};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command, &cli.options) {
        Ok(outcome) => {
            if let Some(path) = &cli.options.out {
                if let Err(e) = std::fs::write(path, &outcome.artifact) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(Status::InputError as u8);
                }
            }
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not worth a panic
            let _ = stdout.write_all(outcome.stdout.as_bytes());
            ExitCode::from(outcome.status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status() as u8)
        }
    }
}
