//! `slgi`: command-line driver for spatial Leggett-Garg scans.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 invalid input.

mod args;
mod commands;
mod output;
mod settings;

use std::ffi::OsString;

use clap::Parser;

pub use args::Cli;
pub use output::OUTPUT_DIR_ENV;
pub use settings::FileConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERICAL: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;

/// Parses `argv` (program name first), runs the job and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    match commands::execute(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                EXIT_VALIDATION
            } else {
                EXIT_NUMERICAL
            }
        }
    }
}
