//! Command-line front end: ring-spec files, computation verbs and result
//! records.

pub mod closure_spec;
pub mod commands;
pub mod record;
pub mod spec;
pub mod suite;

pub use closure_spec::ClosureSpec;
pub use commands::{run, Cli, Command};
pub use record::{exit_code, ResultRecord, Status, Value};
pub use spec::{RingFamily, RingSpecFile};

/// Parses `args` (including the program name), runs the command and
/// returns the rendered output with the exit code.
pub fn run_args<I, T>(args: I) -> (String, u8)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    match Cli::try_parse_from(args) {
        Ok(cli) => {
            let rec = run(&cli.command);
            let out = if cli.json { rec.to_json() + "\n" } else { rec.to_text() };
            (out, rec.exit_code)
        }
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            (e.render().to_string(), code)
        }
    }
}
