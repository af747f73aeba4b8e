use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(netrans::cli::run(std::env::args_os()))
}
