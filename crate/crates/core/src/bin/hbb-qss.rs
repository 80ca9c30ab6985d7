use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use hbb_qss::cli::{execute, Cli, RunConfig};

fn main() -> ExitCode {
    let outcome = RunConfig::from_cli(Cli::parse()).and_then(|cfg| {
        let out = execute(&cfg)?;
        if cfg.out_path.is_none() {
            // A closed pipe (e.g. `| head`) is not an error for the run itself.
            let _ = std::io::stdout().write_all(out.body.as_bytes());
        }
        Ok(out)
    });
    match outcome {
        Ok(out) => {
            eprintln!("{}", out.summary);
            if out.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
