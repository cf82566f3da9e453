use std::io::Write;
use std::process::ExitCode;

use asl_cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Vec::new();
    let mut err = std::io::stderr().lock();
    let code = run(cli, &mut out, &mut err);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(&out);
    let _ = stdout.flush();
    ExitCode::from(code)
}
