mod cli;
mod commands;
mod config;
mod error;
mod output;
mod svg;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, FromArgMatches};

use cli::{Cli, Command, EdCommand, ModelCommand};
use error::{CliError, CliResult};

fn parse(mut args: Vec<OsString>) -> CliResult<Cli> {
    let root = Cli::command();
    let injected = match config::config_path(&args) {
        Some(path) => {
            let entries = config::read(&PathBuf::from(path))?;
            config::inject(&root, &mut args, &entries)?
        }
        None => Vec::new(),
    };
    let matches = match root.clone().try_get_matches_from(&args) {
        Ok(m) => m,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            std::process::exit(0);
        }
        Err(e) if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            let _ = e.print();
            std::process::exit(error::EXIT_USAGE);
        }
        Err(e) => return Err(CliError::usage(e.render().to_string().trim_end())),
    };
    let cli = Cli::from_arg_matches(&matches).map_err(|e| CliError::usage(e.to_string()))?;
    if cli.verbose {
        eprint!("{}", config::describe(&root, &matches, &injected));
    }
    Ok(cli)
}

fn dispatch(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Model(ModelCommand::Eval(a)) => commands::model::run(a),
        Command::Sweep(a) => commands::sweep::run(a),
        Command::Ed(EdCommand::Compare(a)) => commands::ed::run(a),
        Command::Integrals(a) => commands::integrals::run(a),
        Command::Mc(a) => commands::mc::run(a),
        Command::Report(a) => commands::report::run(a),
    }
}

fn main() -> ExitCode {
    let result = parse(std::env::args_os().collect()).and_then(|cli| dispatch(&cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.code as u8)
        }
    }
}
