use std::io::Write;
use std::process::ExitCode;

use radix_approx::cli::{run, CONFIG_ENV};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let config = match std::env::var_os(CONFIG_ENV) {
        Some(path) => match std::fs::read_to_string(&path) {
            Ok(text) => Some(text),
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.to_string_lossy());
                return ExitCode::from(1);
            }
        },
        None => None,
    };
    let out = run(&argv, config.as_deref());
    // A closed pipe is not worth a panic.
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
