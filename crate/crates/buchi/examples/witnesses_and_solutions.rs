//! Extract the least witness of a satisfiable formula and enumerate
//! solutions below a limit.
//!
//! ```bash
//! cargo run -p buchi --example witnesses_and_solutions
//! ```

use buchi::decision::{min_witness, solutions};
use buchi::syntax::parse;

fn main() {
    let one_var = [
        ("V(x) = x & !(x = 0) & !(x = 1)", 2u32),
        ("V(x) = x & !(x = 0) & !(x = 1)", 5),
        ("x = 8", 2),
        ("!(x = x)", 2),
        ("E y. (x = y + y & V(y) = y)", 3),
    ];
    for (text, base) in one_var {
        let phi = parse(text).expect("example parses");
        match min_witness(&phi, base).expect("one free variable") {
            Some(w) => println!("base {base}: least witness of {text} is {w}"),
            None => println!("base {base}: {text} is unsatisfiable"),
        }
    }
    println!();

    let phi = parse("V(x) = x").unwrap();
    for base in [2u32, 3, 10] {
        let sols: Vec<u64> = solutions(&phi, base, 100)
            .expect("single variable")
            .into_iter()
            .map(|t| t[0])
            .collect();
        println!("V_p fixpoints up to 100 at base {base}: {sols:?}");
    }
    println!();

    let pairs = parse("x + y = 4 & E z. x = z + z").unwrap();
    let sols = solutions(&pairs, 2, 4).expect("two variables");
    println!("even x with x + y = 4: {sols:?}");
}
