//! Library half of the `vfrac` command-line tool.
//!
//! [`execute`] is the whole program minus process plumbing, so tests can run
//! it in-process with captured output.

use std::ffi::OsString;
use std::io::Write;

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod verify;

pub use config::{parse_cli, parse_cli_with_env, RunConfig, QUAD_TOL_ENV};
pub use error::CliError;
pub use report::{Payload, Report};

/// Exit status when inputs are valid but a verdict or property check failed.
pub const EXIT_CHECK_FAILED: i32 = 3;

/// Parse, run and emit. Returns the process exit code.
pub fn execute<I, T>(argv: I, env_tol: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let result = parse_cli_with_env(argv, env_tol).and_then(|config| {
        let report = commands::run(&config)?;
        report::emit(&report, &config, stdout)?;
        Ok(report.payload.passed())
    });
    match result {
        Ok(true) => 0,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(CliError::Clap(e)) if !e.use_stderr() => {
            // --help and --version
            let _ = write!(stdout, "{}", e.render());
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "vfrac: error: {}", e.one_line());
            e.exit_code()
        }
    }
}
