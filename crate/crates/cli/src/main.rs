use std::io::Write;
use std::process::ExitCode;

use bigonal::{run, Cli, CliError, Output};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, code) = match run(&cli) {
        Ok(Output::Report(r)) => (r.to_json(), r.exit_code()),
        Ok(Output::Text(t)) => (t, 0),
        Err(CliError::Input(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(p) => std::fs::write(p, &text).map_err(|e| format!("{}: {e}", p.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code as u8)
}
