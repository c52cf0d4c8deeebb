use std::process::ExitCode;

fn main() -> ExitCode {
    plbc::cli::main()
}
