//! Decide a batch of sentences, including the power-gap sentence: there
//! is no power of the base strictly between consecutive powers.
//!
//! ```bash
//! cargo run -p buchi --example decide_sentences
//! ```

use buchi::decision::decide;
use buchi::syntax::parse;

fn main() {
    let sentences = [
        "A x. A y. x + y = y + x",
        "A x. E y. x = y + y | x = S(y + y)",
        "E x. S(x) = 0",
        "E x. (V(x) = x & !(x = 0) & !(x = 1))",
        "A x. (V(x) = x -> !(E y. (x < y & y < x + x & V(y) = y)))",
        "A x. E y. (x < y & V(y) = y)",
    ];
    for base in [2u32, 3, 5] {
        println!("base {base}:");
        for text in sentences {
            let phi = parse(text).expect("example parses");
            let verdict = decide(&phi, base).expect("sentences decide");
            println!("  {verdict:5}  {text}");
        }
        println!();
    }
}
