//! `ccrn`: command-line front-end for the reachability toolkit.
//!
//! Exit codes: 0 reachable / accepted / valid, 1 not reachable / rejected /
//! invalid, 2 input error, 3 internal error (a witness failed its own replay).

use anyhow::{bail, Context, Result};
use ccrn::crn::{Crn, ReachWitness, State};
use ccrn::gen::{generate, GenConfig, GenMode};
use ccrn::parse::{
    emit_problem, emit_witness, parse_dimacs, parse_problem, parse_witness, ProblemFile,
    WitnessFormat,
};
use ccrn::reach::{solve_reach, EliminationCause, SolveResult};
use ccrn::reduce::reduce_3sat;
use ccrn::subreach::{
    decide_subreach_with, min_reactions_with, SubReachOptions, DEFAULT_MAX_REACTIONS,
};
use clap::{Parser, Subcommand, ValueEnum};
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ccrn",
    version,
    about = "Exact reachability for continuous chemical reaction networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

impl From<Format> for WitnessFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => WitnessFormat::Text,
            Format::Json => WitnessFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Reachable,
    ConservedUnreachable,
}

#[derive(clap::Args)]
struct OutputArgs {
    /// Witness output format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Replay every witness before printing it.
    #[arg(long)]
    verify: bool,
    /// Include the intermediate states in the witness.
    #[arg(long)]
    trace: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide reachability and print a witness flux-vector sequence.
    Reach {
        /// Problem file, or `-` for standard input.
        problem: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Decide reachability using at most k distinct reactions.
    Subreach {
        problem: String,
        /// Reaction budget; overrides the `k` line of the problem file.
        #[arg(long)]
        k: Option<u64>,
        /// Report the least number of reactions instead of deciding for k.
        #[arg(long)]
        min: bool,
        /// Cap on candidate reactions for the exponential search.
        #[arg(long, default_value_t = DEFAULT_MAX_REACTIONS)]
        max_subset: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Translate a DIMACS 3-CNF formula into a subset-reachability problem.
    Reduce {
        /// DIMACS file, or `-` for standard input.
        cnf: String,
    },
    /// Check a witness against a problem file.
    Verify { problem: String, witness: String },
    /// Generate a random problem file.
    Gen {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        species: usize,
        #[arg(long, default_value_t = 3)]
        reactions: usize,
        #[arg(long, value_enum, default_value = "reachable")]
        mode: Mode,
        /// Most forward-simulation steps used to build the target.
        #[arg(long, default_value_t = 5)]
        steps: usize,
    },
}

/// Outcome of a command, mapped onto the exit-code contract.
enum Outcome {
    Yes,
    No,
    Internal(String),
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .context("reading standard input")?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn load_problem(path: &str) -> Result<ProblemFile> {
    let text = read_input(path)?;
    let problem = parse_problem(&text).with_context(|| format!("in {path}"))?;
    for (i, j) in problem.crn.duplicate_reactions() {
        eprintln!(
            "warning: {} duplicates {} ({})",
            Crn::reaction_label(j),
            Crn::reaction_label(i),
            problem.crn.reaction_text(i)
        );
    }
    Ok(problem)
}

fn legend(crn: &Crn) -> String {
    (0..crn.num_reactions())
        .map(|j| format!("# {}: {}\n", Crn::reaction_label(j), crn.reaction_text(j)))
        .collect()
}

/// Prints a witness, replaying it first when asked. Returns an error message
/// if the replay fails.
fn print_witness(
    problem: &ProblemFile,
    witness: ReachWitness,
    output: &OutputArgs,
    header: &str,
) -> Option<String> {
    if output.verify {
        if let Err(e) =
            problem
                .crn
                .verify_witness(&problem.start, &problem.target, &witness.sequence)
        {
            return Some(format!("witness failed replay: {e}"));
        }
    }
    let witness = if output.trace {
        match witness.with_trace(&problem.crn, &problem.start) {
            Ok(w) => w,
            Err(e) => return Some(format!("witness failed replay: {e}")),
        }
    } else {
        witness
    };
    let body = emit_witness(&witness, &problem.crn, output.format.into());
    match output.format {
        Format::Text => print!("# {header}\n{}{body}", legend(&problem.crn)),
        Format::Json => print!("{body}"),
    }
    None
}

fn cmd_reach(path: &str, output: &OutputArgs) -> Result<Outcome> {
    let problem = load_problem(path)?;
    match solve_reach(&problem.crn, &problem.start, &problem.target)? {
        SolveResult::Reachable(r) => Ok(
            match print_witness(&problem, r.witness, output, "reachable") {
                Some(err) => Outcome::Internal(err),
                None => Outcome::Yes,
            },
        ),
        SolveResult::NotReachable { eliminated } => {
            match output.format {
                Format::Text => {
                    println!("not reachable");
                    for e in &eliminated {
                        let why = match e.cause {
                            EliminationCause::PermanentlyInapplicable => "never applicable",
                            EliminationCause::NoPositiveFlux => {
                                "no solution gives it positive flux"
                            }
                        };
                        println!(
                            "# eliminated {} ({}): {why}",
                            Crn::reaction_label(e.reaction),
                            problem.crn.reaction_text(e.reaction)
                        );
                    }
                }
                Format::Json => println!("{{\"reachable\": false}}"),
            }
            Ok(Outcome::No)
        }
    }
}

fn cmd_subreach(
    path: &str,
    k: Option<u64>,
    min: bool,
    max_subset: usize,
    output: &OutputArgs,
) -> Result<Outcome> {
    let problem = load_problem(path)?;
    let options = SubReachOptions {
        max_reactions: max_subset,
    };
    if min {
        let least = min_reactions_with(&problem.crn, &problem.start, &problem.target, &options)?;
        return Ok(match least {
            Some(n) => {
                println!("min reactions: {n}");
                Outcome::Yes
            }
            None => {
                println!("min reactions: none (not reachable)");
                Outcome::No
            }
        });
    }
    let Some(k) = k.or(problem.k) else {
        bail!("no reaction budget: add a 'k' line or pass --k");
    };
    let k = usize::try_from(k).unwrap_or(usize::MAX);
    let result = decide_subreach_with(&problem.crn, &problem.start, &problem.target, k, &options)?;
    match (result.decision, result.subset, result.witness) {
        (true, Some(subset), Some(witness)) => {
            let labels: Vec<String> = subset.iter().map(|&j| Crn::reaction_label(j)).collect();
            let header = format!(
                "accepted with {} reaction(s): {}",
                subset.len(),
                labels.join(" ")
            );
            Ok(match print_witness(&problem, witness, output, &header) {
                Some(err) => Outcome::Internal(err),
                None => Outcome::Yes,
            })
        }
        _ => {
            println!("rejected: not reachable with at most {k} reaction(s)");
            Ok(Outcome::No)
        }
    }
}

fn cmd_reduce(path: &str) -> Result<Outcome> {
    let text = read_input(path)?;
    let phi = parse_dimacs(&text).with_context(|| format!("in {path}"))?;
    let inst = reduce_3sat(&phi)?;
    println!(
        "# 3-CNF with {} variable(s) and {} clause(s); satisfiable iff reachable with k = 2n + m reactions",
        phi.num_vars(),
        phi.num_clauses()
    );
    print!("{}", emit_problem(&inst.to_problem()));
    Ok(Outcome::Yes)
}

fn check_trace(problem: &ProblemFile, witness: &ReachWitness) -> Result<(), String> {
    let Some(trace) = &witness.trace else {
        return Ok(());
    };
    let replayed = witness
        .clone()
        .with_trace(&problem.crn, &problem.start)
        .map_err(|e| e.to_string())?;
    let expected: &[State] = replayed.trace.as_deref().unwrap_or_default();
    match trace.iter().zip(expected).position(|(a, b)| a != b) {
        Some(i) => Err(format!("trace state {i} does not match the replay")),
        None => Ok(()),
    }
}

fn cmd_verify(problem_path: &str, witness_path: &str) -> Result<Outcome> {
    let problem = load_problem(problem_path)?;
    let text = read_input(witness_path)?;
    let witness =
        parse_witness(&text, &problem.crn).with_context(|| format!("in {witness_path}"))?;
    let verdict = problem
        .crn
        .verify_witness(&problem.start, &problem.target, &witness.sequence)
        .map_err(|e| e.to_string())
        .and_then(|()| check_trace(&problem, &witness));
    Ok(match verdict {
        Ok(()) => {
            println!(
                "valid: {} step(s) reach the target using {} reaction(s)",
                witness.sequence.len(),
                witness.sequence.used_reactions().len()
            );
            Outcome::Yes
        }
        Err(reason) => {
            println!("invalid: {reason}");
            Outcome::No
        }
    })
}

fn cmd_gen(
    seed: u64,
    species: usize,
    reactions: usize,
    mode: Mode,
    steps: usize,
) -> Result<Outcome> {
    let config = GenConfig {
        species,
        reactions,
        mode: match mode {
            Mode::Reachable => GenMode::Reachable,
            Mode::ConservedUnreachable => GenMode::ConservedUnreachable,
        },
        max_steps: steps,
    };
    let problem = generate(seed, &config)?;
    print!("{}", emit_problem(&problem));
    Ok(Outcome::Yes)
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Reach { problem, output } => cmd_reach(&problem, &output),
        Command::Subreach {
            problem,
            k,
            min,
            max_subset,
            output,
        } => cmd_subreach(&problem, k, min, max_subset, &output),
        Command::Reduce { cnf } => cmd_reduce(&cnf),
        Command::Verify { problem, witness } => cmd_verify(&problem, &witness),
        Command::Gen {
            seed,
            species,
            reactions,
            mode,
            steps,
        } => cmd_gen(seed, species, reactions, mode, steps),
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
        Ok(Outcome::Yes) => ExitCode::SUCCESS,
        Ok(Outcome::No) => ExitCode::from(1),
        Ok(Outcome::Internal(message)) => {
            eprintln!("internal error: {message}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
