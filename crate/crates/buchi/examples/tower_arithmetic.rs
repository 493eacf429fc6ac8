//! The iterated exponent 2_m^k and the witness-scheme bound p^(2_m^3):
//! exact below the cutoff, symbolic above it, comparable either way.
//!
//! ```bash
//! cargo run -p buchi --example tower_arithmetic
//! ```

use buchi::bounds::{iterated_exp2, scheme_bound, TowerInt};

fn main() {
    for (height, top) in [(0u64, 3u64), (1, 3), (2, 3), (3, 3), (4, 3), (5, 3)] {
        let t = iterated_exp2(height, top);
        println!("2_{height}^{top} = {t} (exact: {})", t.is_exact());
    }
    println!();

    for (base, length) in [(2u64, 0u64), (2, 1), (2, 3), (10, 5)] {
        println!("scheme bound p={base}, |phi|={length}: {}", scheme_bound(base, length));
    }
    println!();

    // Comparisons are exact across representations.
    let a = TowerInt::pow(4, TowerInt::exact(32u64));
    let b = TowerInt::pow(2, TowerInt::exact(64u64));
    println!("4^32 vs 2^64: {:?}", a.cmp_value(&b));
    let big = iterated_exp2(4, 3);
    let bigger = scheme_bound(10, 5);
    println!("2_4^3 vs 10^(2_5^3): {:?}", big.cmp_value(&bigger));

    // Materialization fails loudly above the cutoff.
    match iterated_exp2(3, 3).to_exact() {
        Ok(v) => println!("materialized: {v}"),
        Err(e) => println!("overflow as expected: {e}"),
    }
}
