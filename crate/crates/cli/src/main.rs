use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use hecke_cert_cli::commands::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let text = out.render(cli.human, !cli.no_timing);
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::from(out.status as u8)
        }
        Err(e) => {
            eprintln!("hecke-cert: {e}");
            ExitCode::from(e.status() as u8)
        }
    }
}
