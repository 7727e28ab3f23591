//! `lmsr`: command-line front end for lmsr-core.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage error.

mod args;
mod commands;
mod report;

use std::process::ExitCode;

use clap::Parser;

use args::{BenchCommand, Cli, Command, DsCommand, RecurCommand};
use report::CliResult;

fn run(cli: &Cli) -> CliResult<()> {
    let (report, output) = match &cli.command {
        Command::Solve(a) => (commands::solve(a)?, &a.output),
        Command::Decide(a) => (commands::decide(a)?, &a.output),
        Command::Ds(DsCommand::Build(a)) => (commands::ds_build(a)?, &a.output),
        Command::Ds(DsCommand::Verify(a)) => (commands::ds_verify(a)?, &a.output),
        Command::Match(a) => (commands::matching(a)?, &a.output),
        Command::Bench(BenchCommand::Scaling(a)) => (commands::bench_scaling(a)?, &a.output),
        Command::Recur(RecurCommand::Master(a)) => (commands::recur_master(a)?, &a.output),
        Command::Recur(RecurCommand::Function(a)) => (commands::recur_function(a)?, &a.output),
        Command::Recur(RecurCommand::Decision(a)) => (commands::recur_decision(a)?, &a.output),
        Command::Recur(RecurCommand::Limit(a)) => (commands::recur_limit(a)?, &a.output),
        Command::Recur(RecurCommand::Fit(a)) => (commands::recur_fit(a)?, &a.output),
    };
    report.emit(output)
}

fn main() -> ExitCode {
    // clap exits with 2 on bad flags by itself
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lmsr: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
