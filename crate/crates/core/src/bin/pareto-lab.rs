use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(pareto_lab::cli::run(std::env::args_os()) as u8)
}
