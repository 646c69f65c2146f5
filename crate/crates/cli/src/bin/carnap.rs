use std::io::Write;
use std::process::ExitCode;

use carnap::Cli;
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match carnap::run(&cli) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).is_err() {
                return ExitCode::FAILURE;
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
