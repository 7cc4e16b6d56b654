//! `optbench`: deterministic optimizer benchmarks from the command line.
//!
//! Exit status: 0 on success, 1 on runtime failure, 2 on usage error.

mod config;
mod run;

use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let env_seed = std::env::var("OPTBENCH_SEED").ok();
    let parsed = config::parse_args(&args, env_seed.as_deref());
    let config = match parsed {
        Ok(config) => config,
        Err(e) => {
            eprintln!("optbench: {e}");
            eprintln!("{}", config::USAGE);
            return ExitCode::from(2);
        }
    };
    match run::dispatch(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("optbench: {e}");
            ExitCode::from(1)
        }
    }
}
