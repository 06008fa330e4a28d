use std::process::ExitCode;

fn main() -> ExitCode {
    pulsesync::cli::main()
}
