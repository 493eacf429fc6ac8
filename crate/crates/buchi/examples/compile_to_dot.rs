//! Compile a formula to its automaton, print the audit report tree and
//! the DOT rendering.
//!
//! ```bash
//! cargo run -p buchi --example compile_to_dot
//! ```

use buchi::compiler::compile_formula;
use buchi::syntax::parse;

fn main() {
    let text = "E y. (x = y + y & V(y) = y)";
    let formula = parse(text).expect("example parses");

    // Audit mode: no minimization, per-node bound checks.
    let audited = compile_formula(&formula, 2, true);
    println!("audit report for {text}:");
    print!("{}", audited.report.to_text());
    println!();

    // Default mode minimizes after every step.
    let compiled = compile_formula(&formula, 2, false);
    println!(
        "minimized automaton: {} states over {} track(s), variables {:?}",
        compiled.automaton.state_count(),
        compiled.automaton.tracks(),
        compiled.var_order
    );
    let sols: Vec<u64> = (0..=40).filter(|&n| compiled.accepts_tuple(&[n])).collect();
    println!("members up to 40: {sols:?}");
    println!();
    print!("{}", compiled.automaton.to_dot(true));
}
