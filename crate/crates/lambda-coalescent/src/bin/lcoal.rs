use std::process::ExitCode;

use clap::Parser;

use lambda_coalescent::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("lcoal: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
