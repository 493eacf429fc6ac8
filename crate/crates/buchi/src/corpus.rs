//! The bundled formula corpus and the oracle self-test that sweeps it.
//!
//! Corpus files are plain text: one formula per line, with `# p=<base>
//! B=<bound>` directive lines setting the default base and the declared
//! safe quantifier bound for the formulas that follow. Every entry has
//! exactly one free variable; its bound is chosen so that bounded
//! evaluation agrees with the standard model for arguments up to 2000 at
//! every tested base.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::compiler::compile_formula;
use crate::decision::bounded_eval;
use crate::syntax::{parse, Formula};

/// The corpus shipped with the crate.
pub const DEFAULT_CORPUS: &str = include_str!("../corpus.txt");

#[derive(Debug, Clone, Error)]
#[error("corpus line {line}: {message}")]
pub struct CorpusError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub text: String,
    pub formula: Formula,
    /// Default base from the enclosing directive.
    pub base: u32,
    /// Declared safe quantifier bound for the oracle.
    pub oracle_bound: u64,
    pub line: usize,
}

/// Parses a corpus file. Directive lines look like `# p=2 B=4096`;
/// other `#` lines are comments.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut base = 2u32;
    let mut bound = 64u64;
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            for token in rest.split_whitespace() {
                if let Some(v) = token.strip_prefix("p=") {
                    base = v.parse().map_err(|_| CorpusError {
                        line,
                        message: format!("bad base directive `{token}`"),
                    })?;
                    if base < 2 {
                        return Err(CorpusError {
                            line,
                            message: "base must be at least 2".into(),
                        });
                    }
                } else if let Some(v) = token.strip_prefix("B=") {
                    bound = v.parse().map_err(|_| CorpusError {
                        line,
                        message: format!("bad bound directive `{token}`"),
                    })?;
                }
            }
            continue;
        }
        let formula = parse(trimmed).map_err(|e| CorpusError {
            line,
            message: e.to_string(),
        })?;
        let free = formula.free_vars();
        if free.len() != 1 {
            return Err(CorpusError {
                line,
                message: format!(
                    "corpus formulas take exactly one free variable, found {}",
                    free.len()
                ),
            });
        }
        entries.push(CorpusEntry {
            text: trimmed.to_string(),
            formula,
            base,
            oracle_bound: bound,
            line,
        });
    }
    Ok(entries)
}

/// The parsed bundled corpus.
pub fn default_corpus() -> Vec<CorpusEntry> {
    parse_corpus(DEFAULT_CORPUS).expect("bundled corpus parses")
}

#[derive(Debug, Clone)]
pub struct Mismatch {
    pub entry_line: usize,
    pub formula: String,
    pub base: u32,
    pub argument: u64,
    pub automaton: bool,
    pub oracle: bool,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}: `{}` at p={}, n={}: automaton={}, oracle={}",
            self.entry_line, self.formula, self.base, self.argument, self.automaton, self.oracle
        )
    }
}

#[derive(Debug, Clone)]
pub struct SelftestOutcome {
    pub entries: usize,
    pub checks: u64,
    pub mismatches: Vec<Mismatch>,
}

impl SelftestOutcome {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Sweeps every corpus entry over arguments 0..=max_n at each base,
/// comparing automaton membership against the bounded-evaluation oracle
/// at the entry's declared bound (or an override).
pub fn oracle_selftest(
    entries: &[CorpusEntry],
    bases: &[u32],
    max_n: u64,
    bound_override: Option<u64>,
) -> SelftestOutcome {
    let mut mismatches = Vec::new();
    let mut checks = 0u64;
    for entry in entries {
        let var = entry.formula.free_vars().pop().expect("one free variable");
        let bound = bound_override.unwrap_or(entry.oracle_bound);
        for &base in bases {
            let compiled = compile_formula(&entry.formula, base, false);
            let mut base_mismatches: Vec<Mismatch> = (0..=max_n)
                .into_par_iter()
                .filter_map(|n| {
                    let automaton = compiled.accepts_tuple(&[n]);
                    let env = HashMap::from([(var.clone(), n)]);
                    let oracle = bounded_eval(&entry.formula, &env, bound, base)
                        .expect("corpus formulas are closed under their one variable");
                    (automaton != oracle).then(|| Mismatch {
                        entry_line: entry.line,
                        formula: entry.text.clone(),
                        base,
                        argument: n,
                        automaton,
                        oracle,
                    })
                })
                .collect();
            checks += max_n + 1;
            mismatches.append(&mut base_mismatches);
        }
    }
    SelftestOutcome { entries: entries.len(), checks, mismatches }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_corpus_parses_with_directives() {
        let entries = default_corpus();
        assert!(entries.len() >= 30, "corpus has {} entries", entries.len());
        assert!(entries.iter().all(|e| e.base == 2));
        assert!(entries.iter().any(|e| e.oracle_bound >= 4096));
        assert!(entries.iter().all(|e| e.formula.free_vars().len() == 1));
    }

    #[test]
    fn directive_errors_are_reported() {
        assert!(parse_corpus("# p=1\nx = 0").is_err());
        assert!(parse_corpus("# B=abc\nx = 0").is_err());
        assert!(parse_corpus("x = ").is_err());
        assert!(parse_corpus("x = y").is_err());
    }

    #[test]
    fn small_selftest_sweep_passes() {
        let entries = parse_corpus("# p=2 B=64\nx = 0\nE y. x = y + y\n").unwrap();
        let outcome = oracle_selftest(&entries, &[2, 3], 30, None);
        assert!(outcome.passed(), "{:?}", outcome.mismatches);
        assert_eq!(outcome.checks, 2 * 2 * 31);
    }

    #[test]
    fn an_unsound_bound_shows_up_as_a_mismatch() {
        // With bound 2 the oracle misses the witness for x = 6.
        let entries = parse_corpus("# p=2 B=2048\nE y. x = y + y\n").unwrap();
        let outcome = oracle_selftest(&entries, &[2], 10, Some(2));
        assert!(!outcome.passed());
    }
}
