use std::process::ExitCode;

fn main() -> ExitCode {
    heartml::cli::run(std::env::args_os())
}
