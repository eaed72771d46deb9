use clap::error::ErrorKind;
use clap::Parser;

use limop_cli::{execute, Cli, CliError};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let first = e.to_string().lines().next().unwrap_or_default().to_string();
            eprintln!("{}", CliError::new("usage", first.trim_start_matches("error: "), None).to_json_line());
            std::process::exit(1);
        }
    };
    match execute(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("{}", e.to_json_line());
            std::process::exit(1);
        }
    }
}
