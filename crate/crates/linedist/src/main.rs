use std::process::ExitCode;

fn main() -> ExitCode {
    let cfg = match linedist::cli::parse_args(std::env::args_os()) {
        Ok(cfg) => cfg,
        // Usage errors exit with 2, --help/--version with 0.
        Err(err) => err.exit(),
    };
    match linedist::cli::run_experiment(&cfg) {
        Ok(_) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
