mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use defcheck::engine::{EvalOptions, Strategy};
use defcheck::oracle::DEFAULT_BUDGET;
use defcheck::parse::parse_term;
use defcheck::GroundTerm;

use report::{Outcome, RunReport, Settings};

/// Evaluate and model-check logic programs read as definitions.
#[derive(Parser, Debug)]
#[command(name = "defcheck", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Depth bound for term-generated universes [default: 6]
    #[arg(long, global = true, value_name = "K")]
    depth: Option<usize>,

    /// Print a JSON report instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Candidate budget for the brute-force oracles
    #[arg(long, global = true, env = "DEFCHECK_BUDGET", value_name = "N")]
    budget: Option<u128>,

    /// Restrict to the rules of one `#module`
    #[arg(long, global = true, value_name = "NAME")]
    module: Option<String>,

    /// Ground term whose subterms must be in the evaluated universe
    #[arg(long, global = true, value_name = "TERM")]
    focus: Vec<String>,

    /// Use naive instead of semi-naive fixpoint iteration
    #[arg(long, global = true)]
    naive: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check whether a structure is a model of a program
    Check { program: PathBuf, structure: PathBuf },
    /// Print the unique expansion of a structure, or the least Herbrand model
    Eval {
        program: PathBuf,
        structure: Option<PathBuf>,
    },
    /// Print the induction process step by step
    Trace {
        program: PathBuf,
        structure: Option<PathBuf>,
    },
    /// Decide a ground literal in the least Herbrand model
    Query { program: PathBuf, literal: String },
    /// List the least Herbrand model
    Lhm { program: PathBuf },
    /// Validate the `#module` partition and compare whole and modular checks
    Split {
        program: PathBuf,
        structure: Option<PathBuf>,
    },
    /// Compare the models of the Clark completion with the definitional model
    Completion { program: PathBuf, structure: PathBuf },
    /// Brute-force oracles
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Decide minimal satisfaction by enumerating every interpretation
    MinCheck { program: PathBuf, structure: PathBuf },
    /// Compare truth in the least Herbrand model with the Horn reading
    Gap {
        program: PathBuf,
        #[arg(required = true)]
        atoms: Vec<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Eval { .. } => "eval",
            Command::Trace { .. } => "trace",
            Command::Query { .. } => "query",
            Command::Lhm { .. } => "lhm",
            Command::Split { .. } => "split",
            Command::Completion { .. } => "completion",
            Command::Oracle(OracleCommand::MinCheck { .. }) => "oracle min-check",
            Command::Oracle(OracleCommand::Gap { .. }) => "oracle gap",
        }
    }
}

fn settings(cli: &Cli) -> Result<Settings, String> {
    let focus = cli
        .focus
        .iter()
        .map(|text| {
            let t = parse_term(text).map_err(|e| format!("--focus {text}: {e}"))?;
            t.to_ground()
                .ok_or_else(|| format!("--focus {text}: the term must be ground"))
        })
        .collect::<Result<Vec<GroundTerm>, String>>()?;
    let mut options = EvalOptions::default();
    if cli.naive {
        options.strategy = Strategy::Naive;
    }
    options.scope.focus = focus;
    Ok(Settings {
        depth: cli.depth,
        budget: cli.budget.unwrap_or(DEFAULT_BUDGET),
        module: cli.module.clone(),
        options,
    })
}

fn run(cli: &Cli, report: &mut RunReport) -> Result<Outcome, String> {
    let s = settings(cli)?;
    match &cli.command {
        Command::Check { program, structure } => commands::check(&s, report, program, structure),
        Command::Eval { program, structure } => commands::eval(&s, report, program, structure.as_deref()),
        Command::Trace { program, structure } => commands::trace(&s, report, program, structure.as_deref()),
        Command::Query { program, literal } => commands::query(&s, report, program, literal),
        Command::Lhm { program } => commands::lhm(&s, report, program),
        Command::Split { program, structure } => commands::split(&s, report, program, structure.as_deref()),
        Command::Completion { program, structure } => commands::completion(&s, report, program, structure),
        Command::Oracle(OracleCommand::MinCheck { program, structure }) => {
            commands::min_check(&s, report, program, structure)
        }
        Command::Oracle(OracleCommand::Gap { program, atoms }) => commands::gap(&s, report, program, atoms),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut report = RunReport::new(cli.command.name(), cli.depth, cli.budget, &cli.module, &cli.focus, cli.naive);
    let result = run(&cli, &mut report);
    report.set_elapsed(start.elapsed());
    let code = match result {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            if !cli.json {
                print!("{}", outcome.text);
            }
            let code = if outcome.verdict { 0 } else { 1 };
            report.finish(outcome);
            code
        }
        Err(message) => {
            eprintln!("error: {message}");
            report.fail(message);
            2
        }
    };
    if cli.json {
        println!("{}", report.to_json());
    }
    ExitCode::from(code)
}
