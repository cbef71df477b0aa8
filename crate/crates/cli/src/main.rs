//! `tbm`: query, condition, compare and verify belief functions from the
//! command line.
//!
//! Exit codes: 0 success, 1 a check found violations, 2 bad input,
//! 3 conflict or undefined conditioning, 4 resource budget exceeded.

mod commands;
mod render;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgMatches, CommandFactory, FromArgMatches, Parser, Subcommand};

use commands::{CombineRule, CompareArgs, ConditionArgs, Context, Demo, Failure, Operator, Rule, VerifyArgs};

#[derive(Debug, Parser)]
#[command(name = "tbm", version, about = "Belief functions on finite frames")]
struct Cli {
    /// Print machine-readable JSON instead of tables
    #[arg(long, global = true)]
    json: bool,

    /// Use a built-in example in place of the input file
    #[arg(long, global = true, value_enum, value_name = "NAME")]
    demo: Option<Demo>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// bel and pl of set expressions such as {P1,P3}
    #[command(override_usage = "tbm query <FILE> [SET]...\n       tbm --demo soldiers query [SET]...")]
    Query {
        /// Mass file followed by set expressions (all sets with --demo)
        #[arg(value_name = "FILE|SET")]
        inputs: Vec<String>,
    },

    /// Condition on a set and print the revised beliefs
    Condition {
        file: Option<PathBuf>,
        #[arg(long, value_name = "SET")]
        on: String,
        #[arg(long, value_enum, default_value = "dempster")]
        rule: Rule,
        /// Extra sets to report besides the singletons
        #[arg(long, value_name = "SET", num_args = 1..)]
        query: Vec<String>,
        /// Write the revised mass function here (dempster and open only)
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },

    /// Dempster and robust conditional intervals side by side
    Compare {
        file: Option<PathBuf>,
        #[arg(long, value_name = "SET")]
        on: Option<String>,
        #[arg(long, value_name = "SET", num_args = 1..)]
        query: Vec<String>,
        /// Compare on N seeded random masses instead of a file
        #[arg(long, value_name = "N")]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        frame_size: usize,
    },

    /// Replay revisions on a scenario, in command-line order
    Scenario {
        file: Option<PathBuf>,
        /// Remove worlds, e.g. w2,w4
        #[arg(long, value_name = "WORLDS")]
        case1: Vec<String>,
        /// Remove world:source pairs, e.g. w2:S2,w4:S1
        #[arg(long, value_name = "PAIRS")]
        case2: Vec<String>,
        /// The outcome is known to lie in SET
        #[arg(long, value_name = "SET")]
        observe: Vec<String>,
        /// The selected source is one of these, e.g. S1,S2
        #[arg(long, value_name = "SOURCES")]
        case3: Vec<String>,
    },

    /// Check every closed form against exhaustive credal enumeration
    Verify {
        file: Option<PathBuf>,
        /// Verify N seeded random masses instead of a file
        #[arg(long, value_name = "N")]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        frame_size: usize,
    },

    /// Dempster's rule of combination
    #[command(override_usage = "tbm combine <FILE1> <FILE2> [OPTIONS]\n       tbm --demo soldiers combine <FILE> [OPTIONS]")]
    Combine {
        #[arg(required = true, num_args = 1..=2)]
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "dempster")]
        rule: CombineRule,
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
}

/// Scenario operators sorted by their position on the command line.
fn scenario_operators(matches: &ArgMatches) -> Vec<Operator> {
    let mut ops: Vec<(usize, Operator)> = Vec::new();
    type Make = fn(String) -> Operator;
    let kinds: [(&str, Make); 4] = [
        ("case1", Operator::Case1),
        ("case2", Operator::Case2),
        ("observe", Operator::Observe),
        ("case3", Operator::Case3),
    ];
    for (id, make) in kinds {
        if let (Some(indices), Some(values)) = (matches.indices_of(id), matches.get_many::<String>(id)) {
            ops.extend(indices.zip(values).map(|(i, v)| (i, make(v.clone()))));
        }
    }
    ops.sort_by_key(|(i, _)| *i);
    ops.into_iter().map(|(_, op)| op).collect()
}

fn run(cli: Cli, matches: &ArgMatches) -> Result<(String, u8), Failure> {
    let cx = Context {
        json: cli.json,
        demo: cli.demo,
    };
    match cli.command {
        Command::Query { inputs } => commands::query(&cx, &inputs),
        Command::Condition {
            file,
            on,
            rule,
            query,
            output,
        } => commands::condition(
            &cx,
            ConditionArgs {
                file: file.as_deref(),
                on: &on,
                rule,
                query: &query,
                output: output.as_deref(),
            },
        ),
        Command::Compare {
            file,
            on,
            query,
            random,
            seed,
            frame_size,
        } => commands::compare(
            &cx,
            CompareArgs {
                file: file.as_deref(),
                on: on.as_deref(),
                query: &query,
                random,
                seed,
                frame_size,
            },
        ),
        Command::Scenario { file, .. } => {
            let sub = matches.subcommand_matches("scenario").expect("scenario matched");
            commands::scenario(&cx, file.as_deref(), &scenario_operators(sub))
        }
        Command::Verify {
            file,
            random,
            seed,
            frame_size,
        } => commands::verify(
            &cx,
            VerifyArgs {
                file: file.as_deref(),
                random,
                seed,
                frame_size,
            },
        ),
        Command::Combine { files, rule, output } => commands::combine(&cx, &files, rule, output.as_deref()),
    }
}

fn main() -> ExitCode {
    let matches = Cli::command().get_matches();
    let cli = Cli::from_arg_matches(&matches).unwrap_or_else(|e| e.exit());
    match run(cli, &matches) {
        Ok((out, code)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
