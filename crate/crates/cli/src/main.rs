use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (out, code) = clint_cli::run_args(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    ExitCode::from(code)
}
