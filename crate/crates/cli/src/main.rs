use std::process::ExitCode;

use clap::Parser;
use oigb_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let quiet = cli.quiet;
    match run(cli) {
        Ok(report) => {
            print!("{}", report.stdout);
            if !quiet {
                eprint!("{}", report.stderr);
            }
            ExitCode::from(report.exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
