//! Command-line driver: parse a proof script, check it, report verdicts,
//! and optionally emit LaTeX proof trees.
//!
//! Exit codes: 0 when every item passes, 1 when any check fails, 2 on
//! parse errors, 3 on I/O errors.

use clap::{Parser as ClapParser, Subcommand, ValueEnum};
use natded_cli::{parser, runner};
use natded_core::kernel::LogicMode;
use natded_core::texify::{render_proof, render_reduction_block};
use runner::{run_check, CheckedItem, RunOutcome};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

#[derive(ClapParser)]
#[command(name = "natded", about = "Checks natural deduction proof scripts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum ModeArg {
    Minimal,
    Int,
    Classical,
}

impl From<ModeArg> for LogicMode {
    fn from(m: ModeArg) -> LogicMode {
        match m {
            ModeArg::Minimal => LogicMode::Minimal,
            ModeArg::Int => LogicMode::Intuitionistic,
            ModeArg::Classical => LogicMode::Classical,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check every proof and reduction in a script
    Check {
        file: PathBuf,
        /// Default mode for items without their own annotation
        #[arg(long, value_enum, default_value = "minimal")]
        mode: ModeArg,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
        /// Give up on remaining items after this many seconds
        #[arg(long)]
        timeout: Option<u64>,
    },
    /// Check a script and write one LaTeX file per proof and reduction
    Tex {
        file: PathBuf,
        /// Output directory for the .tex files
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "minimal")]
        mode: ModeArg,
        #[arg(long)]
        timeout: Option<u64>,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(message) => {
            eprintln!("{message}");
            ExitCode::from(3)
        }
    }
}

fn load(file: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Check {
            file,
            mode,
            json,
            timeout,
        } => {
            let text = load(&file)?;
            let (script, parsed) = match parser::parse_script(&text) {
                Ok(out) => out,
                Err(e) => {
                    eprintln!("{}: {e}", file.display());
                    return Ok(ExitCode::from(2));
                }
            };
            let outcome = run_check(
                &script,
                &parsed.table,
                mode.into(),
                timeout.map(Duration::from_secs),
            );
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&outcome.report).map_err(|e| e.to_string())?
                );
            } else {
                print_report(&outcome);
            }
            Ok(if outcome.report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Tex {
            file,
            output,
            mode,
            timeout,
        } => {
            let text = load(&file)?;
            let (script, parsed) = match parser::parse_script(&text) {
                Ok(out) => out,
                Err(e) => {
                    eprintln!("{}: {e}", file.display());
                    return Ok(ExitCode::from(2));
                }
            };
            let outcome = run_check(
                &script,
                &parsed.table,
                mode.into(),
                timeout.map(Duration::from_secs),
            );
            print_report(&outcome);
            std::fs::create_dir_all(&output).map_err(|e| format!("{}: {e}", output.display()))?;
            for item in &outcome.checked {
                let (name, rendered) = match item {
                    CheckedItem::Proof {
                        name,
                        proof,
                        mode,
                        library,
                    } => (
                        name,
                        render_proof(proof, *mode, library).map_err(|e| e.to_string())?,
                    ),
                    CheckedItem::Reduction {
                        name,
                        hypotheses,
                        target,
                        first_instance,
                        mode,
                        library,
                    } => {
                        let hyps: Vec<&str> = hypotheses.iter().map(|s| s.as_str()).collect();
                        (
                            name,
                            render_reduction_block(&hyps, target, first_instance, *mode, library)
                                .map_err(|e| e.to_string())?,
                        )
                    }
                };
                let path = output.join(format!("{name}.tex"));
                std::fs::write(&path, rendered).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            Ok(if outcome.report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn print_report(outcome: &RunOutcome) {
    for entry in &outcome.report.entries {
        match entry.verdict.as_str() {
            "pass" => {
                let conclusion = entry.conclusion.as_deref().unwrap_or("");
                let members = entry.context_members.as_deref().unwrap_or(&[]).join(", ");
                println!("PASS {} : {} |- {}", entry.name, members, conclusion);
            }
            _ => {
                println!(
                    "FAIL {} : {}",
                    entry.name,
                    entry.diagnostic.as_deref().unwrap_or("unknown error")
                );
            }
        }
    }
}
