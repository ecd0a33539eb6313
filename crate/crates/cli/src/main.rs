use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use residuum_cli::report::{ErrorEntry, EXIT_INPUT};
use residuum_cli::{run, Command, Report};
use serde_json::Value;

/// Residue currents of semi-meromorphic forms: exact algebra and numeric
/// oracles, reported as JSON.
#[derive(Parser)]
#[command(name = "residuum", version)]
struct Args {
    command: Command,
    /// Input document; not used by verify-all.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Quadrature settings; missing fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Print a verdict summary to stderr.
    #[arg(long)]
    verbose: bool,
}

fn read_json(path: &Path) -> Result<Value, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{} is not valid JSON: {e}", path.display()))
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Ok(threads) = std::env::var("RESIDUUM_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("ignoring RESIDUUM_THREADS={threads}: expected a positive integer"),
        }
    }

    let mut failed = Report::new(args.command.name());
    let load = |p: &Option<PathBuf>| p.as_deref().map(read_json).transpose();
    let report = match (load(&args.input), load(&args.config)) {
        (Ok(input), Ok(config)) => run(args.command, input.as_ref(), config.as_ref()),
        (Err(e), _) | (_, Err(e)) => {
            failed.error(ErrorEntry::io(e));
            failed
        }
    };

    let text = report.to_pretty_string() + "\n";
    if let Some(path) = &args.output {
        if let Err(e) = fs::write(path, &text) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_INPUT as u8);
        }
    } else {
        print!("{text}");
    }
    if args.verbose {
        for v in &report.verdicts {
            eprintln!("{} {}", if v.pass { "PASS" } else { "FAIL" }, v.name);
        }
        for e in &report.errors {
            eprintln!("ERROR {}: {}", e.kind, e.message);
        }
    }
    ExitCode::from(report.exit_code() as u8)
}
