//! `filtmult <task> --input spec.json [--seed N] [--budget M] [--format json|text] [--output path]`
//!
//! Exit status: 0 on success, 1 on engine error, 2 on validation error,
//! 3 when a property check finds a violation.

mod run;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;

use filtmult::error::Error;
use run::{Format, Task};
use spec::ProblemSpec;

#[derive(Parser, Debug)]
#[command(name = "filtmult", version, about = "Multiplicities and mixed multiplicities of monomial filtrations")]
struct Args {
    task: Task,
    /// Problem file; optional for `multigraded-demo`.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Base seed for randomized suites; instance `i` uses `seed + i`.
    #[arg(long)]
    seed: Option<u64>,
    /// Largest `m` for the numeric strategy.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    code: &'a str,
    message: String,
}

fn fail(err: &Error, format: Format) -> ExitCode {
    match format {
        Format::Json => {
            let body = ErrorReport { error: ErrorBody { code: err.code(), message: err.to_string() } };
            eprintln!("{}", serde_json::to_string(&body).expect("error serializes"));
        }
        Format::Text => eprintln!("error [{}]: {err}", err.code()),
    }
    ExitCode::from(if err.is_validation() { 2 } else { 1 })
}

/// `FILTMULT_THREADS` caps the worker pool; `0` runs everything on one thread.
fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var("FILTMULT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| Error::InvalidArgument(format!("FILTMULT_THREADS={raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n.max(1))
        .build_global()
        .map_err(|e| Error::InvalidArgument(e.to_string()))
}

fn load(args: &Args) -> Result<ProblemSpec, Error> {
    match &args.input {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            ProblemSpec::parse(&text)
        }
        None if args.task == Task::MultigradedDemo => Ok(ProblemSpec::default()),
        None => Err(Error::InvalidArgument("--input is required for this task".into())),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Err(e) = configure_threads() {
        return fail(&e, args.format);
    }
    let spec = match load(&args) {
        Ok(s) => s,
        Err(e) => return fail(&e, args.format),
    };
    let seed = args.seed.or(spec.seed).unwrap_or(0);
    let out = match run::run(args.task, &spec, seed, args.budget) {
        Ok(o) => o,
        Err(e) => return fail(&e, args.format),
    };
    let body = match args.format {
        Format::Json => &out.json,
        Format::Text => &out.text,
    };
    match &args.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, body) {
                eprintln!("error [io]: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{body}"),
    }
    if out.failed {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}
