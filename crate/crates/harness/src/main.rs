use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(skelxai_harness::cli::main_with(std::env::args_os()) as u8)
}
