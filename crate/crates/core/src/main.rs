use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use random_betti::cli::{error_json, run, Cli};
use random_betti::Error;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            log::warn!("could not size the thread pool: {e}");
        }
    }
    let outcome = run(&cli).and_then(|text| match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(Error::from),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(Error::from),
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
