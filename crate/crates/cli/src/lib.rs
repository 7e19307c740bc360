//! Command-line front end for the discrete infinite-well model.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::io::Write;

pub use config::{parse_args, Invocation, RunConfig};
pub use error::CliError;

/// Parses, runs and emits; returns the rendered output.
pub fn execute(config: &RunConfig) -> Result<String, CliError> {
    let table = commands::run(config)?;
    Ok(commands::render(config, &table))
}

/// Whole-process behaviour: returns the exit status.
pub fn run_main<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let result = parse_args(args).and_then(|inv| match inv {
        Invocation::Info(text) => {
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
        Invocation::Run(config) => {
            let output = execute(&config)?;
            match &config.out {
                Some(path) => std::fs::write(path, output)?,
                None => stdout.write_all(output.as_bytes())?,
            }
            Ok(())
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "dwell: {e}");
            e.exit_code()
        }
    }
}
