//! Command-line driver: reproducible separation and dimension experiments
//! with CSV output.
//!
//! Exit codes: 0 complete/pass, 1 violation found, 2 usage error,
//! 3 undetermined (merge budget exhausted), 4 enumeration budget exceeded.

mod experiment;

use std::process::ExitCode;

use clap::Parser;

use experiment::{Cli, Outcome};

fn main() -> ExitCode {
    // FRACSEP_THREADS caps worker parallelism; unset means rayon's default.
    if let Ok(n) = std::env::var("FRACSEP_THREADS") {
        if let Ok(n) = n.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match experiment::run(cli) {
        Ok(Outcome::Complete) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => ExitCode::from(1),
        Ok(Outcome::Undetermined) => ExitCode::from(3),
        Ok(Outcome::BudgetExceeded) => ExitCode::from(4),
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::from(e.exit_code())
        }
    }
}
