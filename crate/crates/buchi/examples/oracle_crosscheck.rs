//! Cross-check compiled automata against the brute-force bounded
//! evaluator over the bundled corpus (a reduced sweep; the full range
//! runs in the acceptance suite).
//!
//! ```bash
//! cargo run -p buchi --example oracle_crosscheck
//! ```

use buchi::corpus::{default_corpus, oracle_selftest};

fn main() {
    let entries = default_corpus();
    println!("{} corpus formulas", entries.len());
    let outcome = oracle_selftest(&entries, &[2, 3], 300, None);
    for m in &outcome.mismatches {
        println!("MISMATCH {m}");
    }
    println!(
        "{} membership checks against the oracle, {} mismatches",
        outcome.checks,
        outcome.mismatches.len()
    );
    assert!(outcome.passed());
}
