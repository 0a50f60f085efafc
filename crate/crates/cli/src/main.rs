use std::process::ExitCode;

use clap::Parser;

use bose_lex::args::{Cli, Command};
use bose_lex::commands::{self, write_output, CliError};

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Ingest(args) => {
            let tsv = commands::ingest(&args)?;
            write_output(args.output.as_deref(), &tsv)
        }
        Command::Analyze(args) => {
            let report = commands::analyze(&args)?;
            write_output(args.output.as_deref(), &report)
        }
        Command::Compress(args) => {
            let out = commands::compress_command(&args)?;
            write_output(Some(&args.out_map), &out.map_json)?;
            write_output(args.analyze.output.as_deref(), &out.report_json)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("bose-lex: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
