use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use cubesum::{render, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(rec) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(render(&rec, cli.format()).as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
