use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use regpow::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    let mut out = std::io::stdout().lock();
    match run(&cli) {
        Ok(outcome) => {
            let _ = out.write_all(outcome.render(cli.global.json).as_bytes());
            ExitCode::from(outcome.exit.code() as u8)
        }
        Err(e) => {
            eprint!("{}", e.diagnostic());
            if cli.global.json {
                let _ = out.write_all(e.to_json(cli.command.name()).as_bytes());
            }
            ExitCode::from(e.exit().code() as u8)
        }
    }
}
