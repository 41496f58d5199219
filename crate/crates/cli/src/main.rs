use std::process::ExitCode;

use causal_games_cli::commands::{run, Cli, Outcome, EXIT_INPUT};
use clap::Parser;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let outcome = run(cli.command).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        Outcome::error(&e)
    });
    println!("{}", outcome.document.emit());
    ExitCode::from(outcome.code as u8)
}
