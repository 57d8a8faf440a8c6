use std::io::{ErrorKind, Write};
use std::process::ExitCode;

use clap::Parser;
use frozen_planet_cli::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    let result = run(&cli, &mut stdout, &mut stderr);
    let _ = stdout.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        // downstream closed the pipe (e.g. `| head`); nothing left to report
        Err(CliError::Io(e)) if e.kind() == ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            let _ = writeln!(stderr, "frozen-planet: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
