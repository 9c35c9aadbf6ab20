use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use schoenberg_core::{acceptance, symbols};

mod commands;
mod spec;

use commands::Failure;

#[derive(Parser)]
#[command(name = "schoenberg-lab", version, about = "Batch experiments on Schoenberg matrices")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the experiment described by a JSON spec file.
    Run { spec: PathBuf },
    /// Print the built-in symbol catalog.
    ListSymbols,
    /// Run the built-in acceptance checks.
    Selftest,
}

fn run(path: &Path) -> Result<(), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Spec(format!("cannot read {}: {e}", path.display())))?;
    let parsed = spec::parse(&text).map_err(|e| Failure::Spec(format!("{}: {e}", path.display())))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let resolved = spec::resolve(parsed, dir).map_err(|e| Failure::Spec(format!("{}: {e}", path.display())))?;
    let summary = commands::run(resolved)?;
    println!("{summary}");
    Ok(())
}

fn list_symbols() {
    let entries = symbols::builtin_symbols();
    println!("{:<18} {:<22} {:<40} classes", "name", "params", "formula");
    for e in entries {
        let params = e
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(",");
        println!("{:<18} {:<22} {:<40} {}", e.name, params, e.formula, e.classes);
    }
}

fn selftest() -> ExitCode {
    let mut failed = 0;
    for id in acceptance::criterion_ids() {
        if let Some(res) = acceptance::run(id) {
            println!("{res}");
            if !res.passed {
                failed += 1;
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} check(s) failed");
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Cmd::Run { spec } => match run(&spec) {
            Ok(()) => ExitCode::SUCCESS,
            Err(Failure::Spec(msg)) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
            Err(Failure::Numeric(msg)) => {
                eprintln!("numeric failure: {msg}");
                ExitCode::from(3)
            }
            Err(Failure::Io(msg)) => {
                eprintln!("io error: {msg}");
                ExitCode::from(1)
            }
        },
        Cmd::ListSymbols => {
            list_symbols();
            ExitCode::SUCCESS
        }
        Cmd::Selftest => selftest(),
    }
}
