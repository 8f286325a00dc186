mod args;
mod commands;
mod error;
mod manifest;
mod table;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serde_json::{Map, Value};

use args::{Action, Cli, Command, OutputArgs, ReplayArgs};
use commands::{execute, Body};
use error::CliError;
use manifest::{resolve_timestamp, Format, RunManifest};

const THREADS_ENV: &str = "ABPHASE_THREADS";

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn format_for(command: &Command, json: bool) -> Format {
    match command {
        Command::AlgebraCheck(_) | Command::Hellmann(_) => Format::Json,
        _ if json => Format::Json,
        _ => Format::Csv,
    }
}

/// Run the manifest and render its output; the verdict decides the exit code.
fn render(manifest: &RunManifest) -> Result<(String, Result<(), CliError>), CliError> {
    let outcome = execute(&manifest.command)?;
    let text = match (&outcome.body, manifest.format) {
        (Body::Table(t), Format::Csv) => t.to_csv(manifest),
        (body, _) => {
            let mut doc = Map::new();
            doc.insert("manifest".into(), serde_json::to_value(manifest)?);
            let payload = match body {
                Body::Table(t) => t.to_json(),
                Body::Report(v) => v.clone(),
            };
            if let Value::Object(fields) = payload {
                doc.extend(fields);
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(doc))?;
            s.push('\n');
            s
        }
    };
    Ok((text, outcome.verdict))
}

fn emit(text: &str, output: &OutputArgs) -> Result<(), CliError> {
    match &output.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn replay(args: &ReplayArgs, output: &OutputArgs) -> Result<(), CliError> {
    let original = std::fs::read_to_string(&args.file)?;
    let manifest = RunManifest::parse_output(&original)?;
    let (text, verdict) = render(&manifest)?;
    if args.check {
        if text != original {
            return Err(CliError::Numerical(format!(
                "replay of {} differs from the recorded output",
                args.file.display()
            )));
        }
        return Ok(());
    }
    emit(&text, output)?;
    verdict
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match &cli.action {
        Action::Replay(args) => replay(args, &cli.output),
        Action::Run(command) => {
            let timestamp = resolve_timestamp(cli.output.timestamp)?;
            let manifest = RunManifest::new(command.clone(), format_for(command, cli.output.json), timestamp);
            let (text, verdict) = render(&manifest)?;
            emit(&text, &cli.output)?;
            verdict
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("abphase: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
