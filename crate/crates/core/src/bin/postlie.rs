use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(postlie::cli::run_from_env())
}
