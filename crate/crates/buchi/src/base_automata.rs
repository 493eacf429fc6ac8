//! The four atomic automata the compiler starts from, each within three
//! states (dead state included) and padding-closed by construction:
//! equality, successor, addition and the V_p graph.
//!
//! All of them read tuples least significant digit first, so carries run
//! left to right and the designs are direct digitwise recurrences.

use crate::automata::{letter_count, MultiTrackAutomaton};

/// {(n, n)}: a diagonal state looping on matching digits, plus dead.
pub fn eq_automaton(base: u32) -> MultiTrackAutomaton {
    assert!(base >= 2);
    let letters = letter_count(base, 2);
    let (diag, dead) = (0usize, 1usize);
    let mut delta = vec![dead; 2 * letters];
    for d in 0..base as usize {
        delta[diag * letters + d * base as usize + d] = diag;
    }
    MultiTrackAutomaton::new_dfa(base, 2, diag, vec![true, false], delta)
}

/// {(a, b, c) : a + b = c}: carry automaton; the carry-0 state is initial
/// and accepting, carry-1 is pending, plus dead.
pub fn add_automaton(base: u32) -> MultiTrackAutomaton {
    assert!(base >= 2);
    let p = base as usize;
    let letters = letter_count(base, 3);
    let (carry0, carry1, dead) = (0usize, 1usize, 2usize);
    let mut delta = vec![dead; 3 * letters];
    for (state, carry) in [(carry0, 0usize), (carry1, 1usize)] {
        for a in 0..p {
            for b in 0..p {
                let sum = a + b + carry;
                let c = sum % p;
                let next = if sum / p == 0 { carry0 } else { carry1 };
                delta[state * letters + (a * p + b) * p + c] = next;
            }
        }
    }
    MultiTrackAutomaton::new_dfa(base, 3, carry0, vec![true, false, false], delta)
}

/// {(n, n+1)}: the addition carry automaton specialized to a fixed
/// operand of one, so it starts with a pending carry.
pub fn succ_automaton(base: u32) -> MultiTrackAutomaton {
    assert!(base >= 2);
    let p = base as usize;
    let letters = letter_count(base, 2);
    let (carry0, carry1, dead) = (0usize, 1usize, 2usize);
    let mut delta = vec![dead; 3 * letters];
    for (state, carry) in [(carry0, 0usize), (carry1, 1usize)] {
        for a in 0..p {
            let sum = a + carry;
            let c = sum % p;
            let next = if sum / p == 0 { carry0 } else { carry1 };
            delta[state * letters + a * p + c] = next;
        }
    }
    MultiTrackAutomaton::new_dfa(base, 2, carry1, vec![true, false, false], delta)
}

/// {(n, V_p(n))}: scan the low zeros of n (the power must be zero there),
/// match the digit 1 of the power at the first nonzero digit of n, then
/// require zeros on the power track. The scanning state accepts so that
/// n = 0 pairs with 0.
pub fn v_automaton(base: u32) -> MultiTrackAutomaton {
    assert!(base >= 2);
    let p = base as usize;
    let letters = letter_count(base, 2);
    let (scan, seen, dead) = (0usize, 1usize, 2usize);
    let mut delta = vec![dead; 3 * letters];
    delta[scan * letters] = scan; // (0,0) keeps scanning
    for d in 1..p {
        delta[scan * letters + d * p + 1] = seen; // (d,1), d != 0: mark found
    }
    for d in 0..p {
        delta[seen * letters + d * p] = seen; // (d,0): digits above the mark
    }
    MultiTrackAutomaton::new_dfa(base, 2, scan, vec![true, true, false], delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{v_p, zip_pad, DigitWord};

    #[test]
    fn state_counts_match_the_three_state_design() {
        for base in [2, 3, 5, 10] {
            assert_eq!(eq_automaton(base).state_count(), 2);
            assert_eq!(succ_automaton(base).state_count(), 3);
            assert_eq!(add_automaton(base).state_count(), 3);
            assert_eq!(v_automaton(base).state_count(), 3);
        }
    }

    #[test]
    fn addition_examples() {
        let m = add_automaton(2);
        // 1 + 1 = 2 encodes as (1,1,0)(0,0,1).
        let w = zip_pad(&[1, 1, 2], 2);
        assert_eq!(w.letters(), &[vec![1, 1, 0], vec![0, 0, 1]]);
        assert!(m.accepts(&w).unwrap());
        let bad = DigitWord::new(2, 3, vec![vec![1, 1, 1]]);
        assert!(!m.accepts(&bad).unwrap());
    }

    #[test]
    fn successor_example() {
        let m = succ_automaton(2);
        let w = zip_pad(&[3, 4], 2);
        assert_eq!(w.letters(), &[vec![1, 0], vec![1, 0], vec![0, 1]]);
        assert!(m.accepts(&w).unwrap());
    }

    #[test]
    fn v_examples() {
        let m = v_automaton(3);
        // V_3(6) = 3: 6 = (0,2), 3 = (0,1) gives letters (0,0)(2,1).
        let w = zip_pad(&[6, 3], 3);
        assert_eq!(w.letters(), &[vec![0, 0], vec![2, 1]]);
        assert!(m.accepts(&w).unwrap());
        assert!(!m.accepts(&zip_pad(&[6, 1], 3)).unwrap());
    }

    #[test]
    fn eq_accepts_diagonals_and_rejects_mismatches() {
        let m = eq_automaton(5);
        assert!(m.accepts(&DigitWord::empty(5, 2)).unwrap());
        for n in [0u64, 1, 7, 24, 625, 1000] {
            assert!(m.accepts(&zip_pad(&[n, n], 5)).unwrap());
        }
        assert!(!m.accepts(&DigitWord::new(5, 2, vec![vec![2, 2], vec![1, 3]])).unwrap());
    }

    #[test]
    fn semantics_against_direct_arithmetic() {
        for base in [2u32, 3, 5, 10] {
            let eq = eq_automaton(base);
            let succ = succ_automaton(base);
            let v = v_automaton(base);
            for n in 0..=300u64 {
                for m in 0..=300u64 {
                    assert_eq!(eq.accepts(&zip_pad(&[n, m], base)).unwrap(), n == m);
                    assert_eq!(succ.accepts(&zip_pad(&[n, m], base)).unwrap(), m == n + 1);
                    assert_eq!(
                        v.accepts(&zip_pad(&[n, m], base)).unwrap(),
                        m == v_p(n, base),
                        "V_{base}({n}) vs {m}"
                    );
                }
            }
            let add = add_automaton(base);
            for a in 0..=60u64 {
                for b in 0..=60u64 {
                    for c in 0..=121u64 {
                        assert_eq!(
                            add.accepts(&zip_pad(&[a, b, c], base)).unwrap(),
                            a + b == c
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn all_four_are_padding_closed() {
        for base in [2u32, 3, 5, 10] {
            for m in [
                eq_automaton(base),
                succ_automaton(base),
                add_automaton(base),
                v_automaton(base),
            ] {
                let tuple_len = m.tracks();
                for seed in 0..200u64 {
                    let values: Vec<u64> =
                        (0..tuple_len).map(|i| (seed * 31 + i as u64 * 7) % 97).collect();
                    let w = zip_pad(&values, base);
                    assert_eq!(
                        m.accepts(&w).unwrap(),
                        m.accepts(&w.pad(2)).unwrap()
                    );
                }
            }
        }
    }
}
