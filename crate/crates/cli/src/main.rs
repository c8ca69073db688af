use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use framelab_cli::{run, Cli, EXIT_INPUT};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let report = run(&cli);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(report.render(cli.human).as_bytes());
    ExitCode::from(report.exit_code as u8)
}
