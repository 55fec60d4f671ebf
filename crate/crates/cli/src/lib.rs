//! Command-line harness: run, compare, inspect seeds, generate and
//! normalize expression matrices.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;

use std::io::Write;

pub use args::Cli;
pub use error::CliError;

pub fn dispatch<W: Write, E: Write>(cli: &Cli, out: &mut W, err: &mut E) -> Result<(), CliError> {
    use args::Command;
    match &cli.command {
        Command::Run(a) => commands::cmd_run(a, out, err),
        Command::Compare(a) => commands::cmd_compare(a, out),
        Command::SeedInspect(a) => commands::cmd_seed_inspect(a, out),
        Command::Generate(a) => commands::cmd_generate(a, out),
        Command::Normalize(a) => commands::cmd_normalize(a, out, err),
    }
}
