//! Command-line front end of `qkd-audit-core`: file formats, reports and
//! rendering. The binary is a thin wrapper around [`run`].

pub mod commands;
pub mod error;
pub mod formats;
pub mod output;
pub mod report;

pub use commands::{execute, Cli, Command};
pub use error::{CliError, Result};

/// Executes a parsed command line and writes its output.
pub fn run(cli: &Cli) -> Result<()> {
    let out = cli.command.output_args();
    let quiet = out.quiet;
    let mut warn = |msg: String| {
        if !quiet {
            eprintln!("warning: {msg}");
        }
    };
    let rendered = execute(&cli.command, &mut warn)?;
    let format = out.format.unwrap_or_else(|| cli.command.default_format());
    let text = output::render(&rendered, format)?;
    output::emit(&text, out.output.as_deref())
}
