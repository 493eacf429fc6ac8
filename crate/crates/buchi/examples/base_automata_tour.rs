//! The four atomic automata (equality, successor, addition, V_p) and the
//! closure operations on them.
//!
//! ```bash
//! cargo run -p buchi --example base_automata_tour
//! ```

use buchi::base_automata::{add_automaton, eq_automaton, succ_automaton, v_automaton};
use buchi::encoding::zip_pad;

fn main() {
    let base = 2;
    let eq = eq_automaton(base);
    let succ = succ_automaton(base);
    let add = add_automaton(base);
    let v = v_automaton(base);
    println!(
        "states: eq={}, succ={}, add={}, v={}",
        eq.state_count(),
        succ.state_count(),
        add.state_count(),
        v.state_count()
    );
    println!("eq accepts (7,7):      {}", eq.accepts(&zip_pad(&[7, 7], base)).unwrap());
    println!("succ accepts (3,4):    {}", succ.accepts(&zip_pad(&[3, 4], base)).unwrap());
    println!("add accepts (1,1,2):   {}", add.accepts(&zip_pad(&[1, 1, 2], base)).unwrap());
    println!("v accepts (12,4):      {}", v.accepts(&zip_pad(&[12, 4], base)).unwrap());
    println!();

    // Complement, intersection and projection compose freely.
    let not_eq = eq.complement().unwrap();
    println!("!eq accepts (3,5):     {}", not_eq.accepts(&zip_pad(&[3, 5], base)).unwrap());
    let range_of_v = v.project(0).unwrap().zero_saturate().determinize();
    let in_range: Vec<u64> = (0..=20)
        .filter(|&n| range_of_v.accepts(&buchi::encoding::digits(n, base)).unwrap())
        .collect();
    println!("range of V_2 up to 20: {in_range:?}");
    println!();

    println!("successor automaton, serialized:");
    print!("{}", succ.to_text());
    println!();
    println!("equality automaton as DOT:");
    print!("{}", eq.to_dot(false));
}
