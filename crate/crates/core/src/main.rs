use std::process::ExitCode;

use mertens_audit::cli::{parse_args, run, UsageError};

fn main() -> ExitCode {
    let code = match parse_args(std::env::args_os().skip(1)) {
        Ok(config) => run(&config),
        Err(e) => {
            match &e {
                UsageError::Info(text) => print!("{text}"),
                UsageError::Invalid(text) => eprint!("{text}"),
            }
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
