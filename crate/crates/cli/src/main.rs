use std::process::ExitCode;

use bell_cli::cli::{Cli, Format};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match bell_cli::run(&cli.command) {
        Ok(report) => {
            match cli.format {
                Format::Text => print!("{}", report.render_text()),
                Format::Json => print!("{}", report.render_json()),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
