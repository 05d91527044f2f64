//! `omr`: run homomorphic MatMuls, explore accelerator configurations and
//! check the implementation against its reference oracles.

mod args;
mod bench;
mod dse;
mod exit;
mod keygen;
mod matmul;
mod params;
mod verify;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: cannot size the thread pool: {e}");
            return exit::USAGE.into();
        }
    }
    let result = match &cli.command {
        Command::Matmul(a) => matmul::run(a, &cli),
        Command::Dse(a) => dse::run(a),
        Command::Verify(a) => verify::run(a, &cli),
        Command::Bench(a) => bench::run(a, &cli),
        Command::Keygen(a) => keygen::run(a, &cli),
    };
    match result {
        Ok(code) => code.into(),
        Err(e) => {
            eprintln!("error: {e:#}");
            exit::code_for(&e).into()
        }
    }
}
