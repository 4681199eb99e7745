use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = fiberforge_cli::dispatch(std::env::args_os());
    // A closed pipe on either stream is not an error worth reporting.
    if !out.stdout.is_empty() {
        let _ = writeln!(std::io::stdout().lock(), "{}", out.stdout.trim_end());
    }
    if !out.stderr.is_empty() {
        let _ = writeln!(std::io::stderr().lock(), "{}", out.stderr.trim_end());
    }
    ExitCode::from(out.code as u8)
}
