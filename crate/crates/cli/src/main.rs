//! `coflow`: deadlock analysis for single-file Go programs.

mod corpus;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use coflow_core::engine::DEFAULT_MAX_STEPS;
use coflow_core::gofront::analyze;

use report::{exit_code, Report};

#[derive(Parser)]
#[command(
    name = "coflow",
    version,
    about = "Static deadlock detection for a Go subset"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one Go file.
    ///
    /// Exit status: 0 no deadlock, 1 deadlock, 2 unsupported feature,
    /// 3 error or inconclusive.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Include the rule firings of every reduction.
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
    },
    /// Run every `<dir>/<expected>/*.go` and compare with the expected verdict.
    Corpus {
        dir: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Analyze {
            file,
            format,
            trace,
            max_steps,
        } => run_analyze(&file, format, trace, max_steps),
        Command::Corpus { dir, max_steps } => run_corpus(&dir, max_steps),
    };
    ExitCode::from(code)
}

fn run_analyze(file: &PathBuf, format: Format, trace: bool, max_steps: usize) -> u8 {
    let src = match fs::read_to_string(file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("coflow: {}: {e}", file.display());
            return 3;
        }
    };
    let analysis = match analyze(&src, max_steps) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("coflow: {}: {e}", file.display());
            return 3;
        }
    };
    let report = Report::new(&file.display().to_string(), &analysis, trace);
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => println!("{}", report.to_json()),
    }
    exit_code(report.verdicts.iter().map(|c| c.verdict.as_str()))
}

fn run_corpus(dir: &Path, max_steps: usize) -> u8 {
    let Some(files) = corpus::collect(dir) else {
        eprintln!("coflow: {}: not a corpus directory", dir.display());
        return 3;
    };
    let entries = corpus::run(&files, max_steps);
    let width = entries
        .iter()
        .map(|e| e.path.display().to_string().len())
        .max()
        .unwrap_or(0);
    let mut total_ms = 0.0;
    for e in &entries {
        total_ms += e.elapsed_ms;
        let mark = if e.matches() { "ok" } else { "MISMATCH" };
        println!(
            "{:<width$}  expected {:<12} got {:<12} {:>8.2} ms  {mark}",
            e.path.display(),
            e.expected,
            e.actual,
            e.elapsed_ms
        );
    }
    let matched = entries.iter().filter(|e| e.matches()).count();
    println!("{matched}/{} match ({total_ms:.1} ms)", entries.len());
    if entries.is_empty() {
        3
    } else if matched == entries.len() {
        0
    } else {
        1
    }
}
