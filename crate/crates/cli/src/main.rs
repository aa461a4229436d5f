use std::io::Write;
use std::process::ExitCode;

use biaspca_cli::args::Command;
use biaspca_cli::commands::write_report;
use biaspca_cli::{execute, Cli};
use clap::Parser;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let out_path = match &cli.command {
        Command::Pca(a) => a.output.out.clone(),
        Command::BiasSweep(a) => a.output.out.clone(),
        Command::Rpca(a) => a.output.out.clone(),
        Command::Compare(a) => a.output.out.clone(),
    };
    let result = execute(&cli).and_then(|output| {
        match &out_path {
            Some(path) => {
                write_report(path, &output)?;
                print!("{}", output.summary);
            }
            None => {
                print!("{}", output.report);
                eprint!("{}", output.summary);
            }
        }
        Ok(())
    });
    let _ = std::io::stdout().flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
