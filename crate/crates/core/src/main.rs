use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(cxqp::cli::main())
}
