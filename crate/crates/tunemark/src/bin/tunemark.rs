use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(tunemark::cli::main_entry() as u8)
}
