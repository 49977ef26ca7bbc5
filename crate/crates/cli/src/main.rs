use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use cover_cli::{parse_input, run_command, selftest, CliError, Command, Report};

/// Fundamental groups of totally ramified abelian covers.
#[derive(Parser, Debug)]
#[command(name = "cover", version)]
struct Args {
    command: Command,
    /// Scenario file (not needed for `selftest`).
    scenario: Option<PathBuf>,
    /// Print the JSON payload instead of the text summary.
    #[arg(long)]
    json: bool,
    /// Write the output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn execute(args: &Args) -> Result<Report, CliError> {
    if args.command == Command::Selftest {
        return Ok(selftest::run());
    }
    let path = args
        .scenario
        .as_ref()
        .ok_or_else(|| CliError::Io(format!("`{}` needs a scenario file", args.command.name())))?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let sc = parse_input(&text)?;
    run_command(args.command, &sc)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let report = match execute(&args) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let body = if args.json { report.json_string() } else { report.text.clone() };
    if let Some(out) = &args.out {
        if let Err(e) = std::fs::write(out, &body) {
            eprintln!("{}", CliError::Io(format!("{}: {e}", out.display())));
            return ExitCode::from(1);
        }
    } else {
        print!("{body}");
    }
    let failed = report.json.get("failed").and_then(|v| v.as_u64()).unwrap_or(0);
    if failed > 0 {
        ExitCode::from(4)
    } else {
        ExitCode::SUCCESS
    }
}
