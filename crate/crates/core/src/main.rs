use std::process::ExitCode;

fn main() -> ExitCode {
    srisum::cli::run()
}
