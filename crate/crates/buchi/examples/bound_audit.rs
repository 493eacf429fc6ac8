//! The quantitative side of the theory: audit the witness bound
//! witness < p^states <= p^(2_|phi|^3) for concrete formulas, list the
//! axioms, and render a witness-bound scheme instance.
//!
//! ```bash
//! cargo run -p buchi --example bound_audit
//! ```

use buchi::axioms::{check_base_axioms, render_bound_instance};
use buchi::decision::verify_bound;
use buchi::syntax::parse;

fn main() {
    for text in ["x = 0", "V(x) = x & !(x = 0) & !(x = 1)", "!(x = x)"] {
        let phi = parse(text).expect("example parses");
        let report = verify_bound(&phi, 2).expect("one free variable");
        println!("{report}");
    }

    println!("axioms at base 3:");
    for check in check_base_axioms(3) {
        println!("{}\t{}\t{}", check.label, check.text, check.holds);
    }
    println!();

    let phi = parse("x = 0").unwrap();
    println!(
        "scheme instance for {phi}: {}",
        render_bound_instance(&phi, 2).expect("one free variable")
    );
}
