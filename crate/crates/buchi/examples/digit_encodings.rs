//! Least-significant-digit-first encodings of numbers and tuples, and the
//! V_p function computed directly.
//!
//! ```bash
//! cargo run -p buchi --example digit_encodings
//! ```

use buchi::encoding::{digits, v_p, zip_pad};

fn main() {
    println!("(0)_2  = {}", digits(0, 2));
    println!("(13)_2 = {}", digits(13, 2));
    println!("(86)_5 = {}", digits(86, 5));
    println!();

    let w = zip_pad(&[86, 42, 33], 5);
    println!("zip_pad(86, 42, 33; base 5) = {w}");
    println!("values back: {:?}", w.values());
    println!("padded once: {} -> values {:?}", w.pad(1), w.pad(1).values());
    println!();

    for (n, p) in [(0u64, 2u32), (12, 2), (86, 5), (6, 3), (1000, 10)] {
        println!("V_{p}({n}) = {}", v_p(n, p));
    }
}
