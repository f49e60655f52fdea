mod args;
mod commands;
mod error;
mod report;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Catalog { out } => commands::catalog(out.as_deref()),
        Command::Density(a) => commands::density(&a),
        Command::TvRate(a) => commands::rate(&a, levylab::rates::Quantity::Tv),
        Command::GradRate(a) => commands::rate(&a, levylab::rates::Quantity::Grad),
        Command::VerifyBounds(a) => commands::verify_bounds(&a),
        Command::McCheck(a) => commands::mc_check(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("levylab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
