use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use neocalc::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = std::env::var("NEOCALC_EVAL_BUDGET").ok();
    let result = run(&cli.command, budget).and_then(|doc| {
        let json = doc.to_json();
        match &cli.command.output().out {
            Some(path) => std::fs::write(path, json).map_err(|e| CliError::io(path, e)),
            None => std::io::stdout()
                .write_all(json.as_bytes())
                .map_err(|e| CliError::Io(e.to_string())),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("neocalc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
