//! The `gradium` command-line tool.

mod bindings;
mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use report::{Body, Envelope, Status};

#[derive(Parser)]
#[command(name = "gradium", version, about = "Graded call-by-push-value: check, run, translate and test programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum System {
    Effect,
    Coeffect,
    /// Coeffect mode with the resource-tracking semantics.
    Resource,
}

#[derive(Subcommand)]
enum Command {
    /// Type-check a `.cbpv` program and report its type and grading.
    Check {
        file: PathBuf,
        /// Defaults to the file's `-- mode:` header, then `effect`.
        #[arg(long, value_enum)]
        system: Option<System>,
        #[arg(long)]
        algebra: Option<String>,
        /// Fail unless the program checks within this effect bound.
        #[arg(long)]
        expect_effect: Option<String>,
        /// Fail unless the program checks at these grades, e.g. `x=2,y=0`.
        #[arg(long)]
        expect_grades: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Check, then evaluate a `.cbpv` program.
    Run {
        file: PathBuf,
        #[arg(long, value_enum)]
        system: Option<System>,
        #[arg(long)]
        algebra: Option<String>,
        /// Closed values for the context, e.g. `x=(),y=<junk>`.
        #[arg(long)]
        env: Option<String>,
        /// Grades to run at instead of the inferred ones.
        #[arg(long)]
        grades: Option<String>,
        /// Report per-variable dynamic usage.
        #[arg(long)]
        usage: bool,
        #[arg(long)]
        json: bool,
    },
    /// Translate a `.lam` source program into graded CBPV.
    Translate {
        file: PathBuf,
        /// Defaults to the file's `-- dialect:` header.
        #[arg(long)]
        dialect: Option<String>,
        #[arg(long)]
        algebra: Option<String>,
        /// Check the translation lands at the expected judgement.
        #[arg(long)]
        check: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run a randomized property suite.
    Soundness {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long, default_value_t = 3)]
        depth: u32,
        /// Run trials on one thread.
        #[arg(long)]
        sequential: bool,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return bad_args(e, start),
    };
    let (name, json, result) = match cli.command {
        Command::Check { file, system, algebra, expect_effect, expect_grades, json } => (
            "check",
            json,
            commands::check(&file, system, algebra.as_deref(), expect_effect.as_deref(), expect_grades.as_deref()),
        ),
        Command::Run { file, system, algebra, env, grades, usage, json } => (
            "run",
            json,
            commands::run(&file, system, algebra.as_deref(), env.as_deref(), grades.as_deref(), usage),
        ),
        Command::Translate { file, dialect, algebra, check, json } => (
            "translate",
            json,
            commands::translate(&file, dialect.as_deref(), algebra.as_deref(), check),
        ),
        Command::Soundness { suite, trials, seed, algebra, depth, sequential, json } => (
            "soundness",
            json,
            commands::soundness(&suite, trials, seed, algebra.as_deref(), depth, sequential),
        ),
    };
    let (status, code, body) = match result {
        Ok(commands::Outcome { body, failure: None }) => (Status::Ok, 0, body),
        Ok(commands::Outcome { body, failure: Some(kind) }) => (Status::Failed, kind.exit_code(), body),
        Err(d) => (Status::Error, d.kind.exit_code(), Body::Error { error: d }),
    };
    emit(name, json, status, body, start);
    ExitCode::from(code as u8)
}

fn emit(command: &'static str, json: bool, status: Status, body: Body, start: Instant) {
    if json {
        let env = Envelope {
            command,
            status,
            body,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        };
        println!("{}", serde_json::to_string_pretty(&env).expect("reports serialize"));
    } else if status == Status::Error {
        eprint!("{}", body.human());
    } else {
        print!("{}", body.human());
    }
}

/// Command-line errors are user errors (exit 1), reported as JSON when
/// `--json` was among the arguments.
fn bad_args(e: clap::Error, start: Instant) -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let command = ["check", "run", "translate", "soundness"]
        .into_iter()
        .find(|c| args.get(1).is_some_and(|a| a == c));
    match command {
        Some(c) if args.iter().any(|a| a == "--json") => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("");
            let d = report::Diagnostic::usage(first.trim_start_matches("error: "));
            emit(c, true, Status::Error, Body::Error { error: d }, start);
        }
        _ => eprint!("{e}"),
    }
    ExitCode::from(1)
}
