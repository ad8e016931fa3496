use std::process::ExitCode;

fn main() -> ExitCode {
    qeraser::cli::main()
}
