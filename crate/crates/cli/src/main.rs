use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use perm_moments_cli::{run, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = RunConfig::from_opts(&cli.opts).and_then(|config| run(cli.command, &config));
    match outcome {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.body.as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            for note in &out.notes {
                eprintln!("perm-moments: {note}");
            }
            ExitCode::from(out.status)
        }
        Err(e) => {
            eprintln!("perm-moments: error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
