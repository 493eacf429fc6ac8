//! Batch command-line front end over the library: one-shot queries for
//! scripts and humans. Results go to standard output, diagnostics to
//! standard error. Exit codes: 0 for success/true, 1 for false/unsat,
//! 2 for usage or parse errors.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use buchi::axioms::{check_base_axioms, render_bound_instance};
use buchi::compiler::compile_formula;
use buchi::corpus::{default_corpus, oracle_selftest, parse_corpus};
use buchi::decision::{decide, min_witness, solutions, verify_bound};
use buchi::syntax::{self, Formula};

#[derive(Parser)]
#[command(name = "buchi", version, about = "Decide sentences of base-p arithmetic with V_p by compiling formulas to multi-track automata", disable_help_subcommand = true)]
struct Cli {
    /// Digit base p (at least 2).
    #[arg(long, global = true, default_value_t = 2)]
    base: u32,
    /// Audit mode: disable minimization so per-node state counts follow
    /// the textbook constructions.
    #[arg(long, global = true)]
    no_minimize: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FormulaArg {
    /// Formula text, e.g. "A x. E y. x = y + y | x = S(y + y)".
    formula: String,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a sentence; prints true or false.
    Decide(FormulaArg),
    /// Least witness of a one-free-variable formula; prints the number
    /// or "none".
    Witness(FormulaArg),
    /// All solutions up to a limit (1 to 3 free variables).
    Solutions {
        #[command(flatten)]
        formula: FormulaArg,
        /// Largest value tried for each variable.
        #[arg(long, default_value_t = 64)]
        max: u64,
    },
    /// Compile a formula and print its automaton.
    Compile {
        #[command(flatten)]
        formula: FormulaArg,
        /// Emit Graphviz DOT instead of the default text serialization.
        #[arg(long, conflicts_with = "serialize")]
        dot: bool,
        /// Emit the structured text serialization (the default).
        #[arg(long)]
        serialize: bool,
    },
    /// Audit the witness and state bounds of a one-free-variable formula.
    BoundCheck(FormulaArg),
    /// List the fixed axioms of the theory; the scheme instance for a
    /// formula can be rendered with --instance.
    Axioms {
        /// Also decide each axiom in the standard model.
        #[arg(long)]
        check: bool,
        /// Render the witness-bound scheme instance for this formula.
        #[arg(long, value_name = "FORMULA")]
        instance: Option<String>,
    },
    /// Cross-check compiled automata against the brute-force oracle over
    /// the formula corpus.
    Selftest {
        /// Corpus file; defaults to the bundled corpus.
        #[arg(long)]
        corpus: Option<std::path::PathBuf>,
        /// Override every entry's declared oracle bound.
        #[arg(long)]
        oracle_bound: Option<u64>,
        /// Largest argument swept per formula.
        #[arg(long, default_value_t = 200)]
        max_n: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.base < 2 {
        eprintln!("error: --base must be at least 2");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn parse_formula(text: &str) -> Result<Formula, String> {
    syntax::parse(text).map_err(|e| e.to_string())
}

/// Best-effort stdout write: a consumer closing the pipe early must not
/// turn a correct run into a panic.
fn emit(text: &str) {
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn emit_line(text: &str) {
    emit(text);
    emit("\n");
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let base = cli.base;
    match cli.command {
        Command::Decide(arg) => {
            let phi = parse_formula(&arg.formula)?;
            let truth = decide(&phi, base).map_err(|e| e.to_string())?;
            emit_line(if truth { "true" } else { "false" });
            Ok(if truth { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Witness(arg) => {
            let phi = parse_formula(&arg.formula)?;
            match min_witness(&phi, base).map_err(|e| e.to_string())? {
                Some(w) => {
                    emit_line(&w.to_string());
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    emit_line("none");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Solutions { formula, max } => {
            let phi = parse_formula(&formula.formula)?;
            let sols = solutions(&phi, base, max).map_err(|e| e.to_string())?;
            let any = !sols.is_empty();
            for tuple in sols {
                let line =
                    tuple.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
                emit_line(&line);
            }
            Ok(if any { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Compile { formula, dot, serialize: _ } => {
            let phi = parse_formula(&formula.formula)?;
            let compiled = compile_formula(&phi, base, cli.no_minimize);
            if dot {
                emit(&compiled.automaton.to_dot(false));
            } else {
                emit(&compiled.automaton.to_text());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::BoundCheck(arg) => {
            let phi = parse_formula(&arg.formula)?;
            let report = verify_bound(&phi, base).map_err(|e| e.to_string())?;
            emit(&report.to_string());
            let ok = report.witness_within_cap
                && report.states_within_tower
                && report.node_bounds_ok;
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Axioms { check, instance } => {
            if let Some(text) = instance {
                let phi = parse_formula(&text)?;
                let rendered =
                    render_bound_instance(&phi, base).map_err(|e| e.to_string())?;
                emit_line(&rendered);
                return Ok(ExitCode::SUCCESS);
            }
            let checks = check_base_axioms(base);
            let mut all = true;
            for entry in checks {
                let verdict = if check {
                    all &= entry.holds;
                    if entry.holds { "true" } else { "false" }
                } else {
                    "-"
                };
                emit_line(&format!("{}\t{}\t{}", entry.label, entry.text, verdict));
            }
            Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Selftest { corpus, oracle_bound, max_n } => {
            let entries = match corpus {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                    parse_corpus(&text).map_err(|e| e.to_string())?
                }
                None => default_corpus(),
            };
            let outcome = oracle_selftest(&entries, &[base], max_n, oracle_bound);
            for m in &outcome.mismatches {
                emit_line(&format!("MISMATCH {m}"));
            }
            emit_line(&format!(
                "selftest: {} formulas, {} checks, {} mismatches",
                outcome.entries,
                outcome.checks,
                outcome.mismatches.len()
            ));
            Ok(if outcome.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}
