//! Parse a formula, measure it, and rewrite it into the flat atomic form
//! the compiler consumes.
//!
//! ```bash
//! cargo run -p buchi --example parse_and_flatten
//! ```

use buchi::syntax::{complexity, flatten, parse};

fn main() {
    let texts = [
        "0 = 0",
        "V(x) = x & !(x = 0)",
        "x < 3",
        "V(x + y) = z",
        "A x. (V(x) = x -> !(E y. (x < y & y < x + x & V(y) = y)))",
    ];
    for text in texts {
        let formula = parse(text).expect("example formulas parse");
        let measures = complexity(&formula);
        let flat = flatten(&formula);
        println!("input:       {text}");
        println!("rendered:    {formula}");
        println!("free vars:   {:?}", formula.free_vars());
        println!(
            "complexity:  {} connectives/quantifiers, length {}",
            measures.n_connectives, measures.length
        );
        println!("flat form:   {flat}");
        println!(
            "flat counts: {} connectives/quantifiers, atoms distinct: {}",
            flat.n_connectives(),
            flat.atoms_distinct()
        );
        println!();
    }
}
