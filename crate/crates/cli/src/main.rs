use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cotangent::corpus::run_corpus;
use cotangent::job::{parse_job, JobSpec, Task};
use cotangent::report::{explain, run_job, RunOptions, Status};
use cotangent::Error;

/// Higher tangent spaces, normal cones and curvilinear obstructions at a point.
#[derive(Parser)]
#[command(name = "cotangent", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a job file and print its report.
    Compute {
        job: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        /// Human-readable text instead of JSON.
        #[arg(long, conflicts_with = "structured")]
        text: bool,
        /// JSON report (default).
        #[arg(long)]
        structured: bool,
        /// Include per-task wall-clock seconds.
        #[arg(long)]
        timing: bool,
    },
    /// Compare every job in a directory against its `.expected.json` golden.
    Corpus { dir: PathBuf },
    /// Print resolution generators, linearized matrices and minimal-model survivors.
    Explain {
        job: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Args)]
struct Overrides {
    /// Highest tangent index N.
    #[arg(long)]
    max_index: Option<u32>,
    /// Replace the job's task list (repeatable).
    #[arg(long = "task")]
    tasks: Vec<String>,
    /// Seed for random sweep directions.
    #[arg(long)]
    seed: Option<u64>,
}

fn load(path: &PathBuf, o: &Overrides) -> Result<JobSpec, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    let mut spec = parse_job(&text)?;
    if let Some(n) = o.max_index {
        if n == 0 {
            return Err(Error::InvalidInput("max_index must be at least 1".into()));
        }
        spec.max_index = n;
    }
    if !o.tasks.is_empty() {
        spec.tasks = o.tasks.iter().map(|t| t.parse::<Task>()).collect::<Result<_, _>>()?;
        if spec.tasks.contains(&Task::Cosection) && spec.cosection.is_none() {
            return Err(Error::InvalidInput("task 'cosection' requires a cosection".into()));
        }
    }
    if let Some(seed) = o.seed {
        spec.sweep.seed = Some(seed);
        if spec.sweep.random_samples == 0 {
            spec.sweep.random_samples = 8;
        }
    }
    Ok(spec)
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(Status::of_error(e).code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Compute { job, overrides, text, structured: _, timing } => {
            let spec = match load(&job, &overrides) {
                Ok(s) => s,
                Err(e) => return fail(&e),
            };
            let report = run_job(&spec, &RunOptions { timing });
            if text {
                print!("{}", report.to_text());
            } else {
                print!("{}", report.to_json());
            }
            for name in report.failed_checks() {
                eprintln!("check failed: {name}");
            }
            if let Some(msg) = report.value.get("error").and_then(|e| e.get("message")).and_then(|m| m.as_str()) {
                eprintln!("error: {msg}");
            }
            ExitCode::from(report.status.code() as u8)
        }
        Command::Corpus { dir } => match run_corpus(&dir) {
            Ok(summary) => {
                print!("{summary}");
                ExitCode::from(summary.exit_code() as u8)
            }
            Err(e) => fail(&e),
        },
        Command::Explain { job, overrides } => {
            let out = load(&job, &overrides).and_then(|spec| explain(&spec));
            match out {
                Ok(s) => {
                    print!("{s}");
                    ExitCode::SUCCESS
                }
                Err(e) => fail(&e),
            }
        }
    }
}
