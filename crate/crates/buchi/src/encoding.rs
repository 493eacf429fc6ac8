//! LSB-first base-p digit encodings of numbers and tuples, and direct
//! arithmetic for V_p.
//!
//! Everything the automata side of the crate computes is tested against
//! these definitions: they are the ground-truth semantics.

use std::fmt;

/// A word over the alphabet of k-tuples of base-p digits, least
/// significant letter first. k = 0 is allowed; its letters are empty
/// tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitWord {
    base: u32,
    tracks: usize,
    letters: Vec<Vec<u32>>,
}

impl DigitWord {
    /// Builds a word after checking every digit is below the base and
    /// every letter has the right width.
    pub fn new(base: u32, tracks: usize, letters: Vec<Vec<u32>>) -> Self {
        assert!(base >= 2, "base must be at least 2");
        for letter in &letters {
            assert_eq!(letter.len(), tracks, "letter width must equal track count");
            assert!(letter.iter().all(|&d| d < base), "digit out of range");
        }
        DigitWord { base, tracks, letters }
    }

    pub fn empty(base: u32, tracks: usize) -> Self {
        Self::new(base, tracks, Vec::new())
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn tracks(&self) -> usize {
        self.tracks
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Vec<u32>] {
        &self.letters
    }

    pub fn push_letter(&mut self, letter: Vec<u32>) {
        assert_eq!(letter.len(), self.tracks);
        assert!(letter.iter().all(|&d| d < self.base));
        self.letters.push(letter);
    }

    /// The same word with all trailing all-zero letters removed.
    pub fn strip_padding(&self) -> Self {
        let mut letters = self.letters.clone();
        while letters.last().is_some_and(|l| l.iter().all(|&d| d == 0)) {
            letters.pop();
        }
        DigitWord { base: self.base, tracks: self.tracks, letters }
    }

    /// The word extended by `count` all-zero letters.
    pub fn pad(&self, count: usize) -> Self {
        let mut letters = self.letters.clone();
        letters.extend(std::iter::repeat(vec![0; self.tracks]).take(count));
        DigitWord { base: self.base, tracks: self.tracks, letters }
    }

    /// Per-track positional value; trailing zero letters do not change it.
    pub fn values(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.tracks];
        for letter in self.letters.iter().rev() {
            for (acc, &d) in out.iter_mut().zip(letter) {
                *acc = *acc * u64::from(self.base) + u64::from(d);
            }
        }
        out
    }
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "ε");
        }
        for letter in &self.letters {
            write!(f, "(")?;
            for (i, d) in letter.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{d}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// The LSB-first base-p expansion of n: empty for 0, no trailing zeros
/// otherwise.
pub fn digits(mut n: u64, base: u32) -> DigitWord {
    assert!(base >= 2);
    let mut letters = Vec::new();
    while n > 0 {
        letters.push(vec![(n % u64::from(base)) as u32]);
        n /= u64::from(base);
    }
    DigitWord { base, tracks: 1, letters }
}

/// Encodes a tuple on k tracks: each track reads its expansion padded
/// with zeros to the common maximum length.
pub fn zip_pad(values: &[u64], base: u32) -> DigitWord {
    assert!(base >= 2);
    let expansions: Vec<DigitWord> = values.iter().map(|&n| digits(n, base)).collect();
    let len = expansions.iter().map(DigitWord::len).max().unwrap_or(0);
    let mut letters = Vec::with_capacity(len);
    for i in 0..len {
        letters.push(
            expansions
                .iter()
                .map(|w| w.letters.get(i).map_or(0, |l| l[0]))
                .collect(),
        );
    }
    DigitWord { base, tracks: values.len(), letters }
}

/// V_p: the largest power of p dividing n, with V_p(0) = 0.
pub fn v_p(n: u64, base: u32) -> u64 {
    assert!(base >= 2);
    if n == 0 {
        return 0;
    }
    let p = u64::from(base);
    let mut rest = n;
    let mut power = 1u64;
    while rest % p == 0 {
        rest /= p;
        power *= p;
    }
    power
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn digits_of_zero_is_the_empty_word() {
        assert!(digits(0, 2).is_empty());
        assert!(digits(0, 10).is_empty());
    }

    #[test]
    fn digits_examples() {
        // 13 = 1 + 0*2 + 1*4 + 1*8
        assert_eq!(
            digits(13, 2).letters(),
            &[vec![1], vec![0], vec![1], vec![1]]
        );
        // 86 = 1 + 2*5 + 3*25
        assert_eq!(digits(86, 5).letters(), &[vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn worked_three_track_example() {
        // The three-track worked example: (1 + 2*5 + 3*25, 2 + 3*5 + 25,
        // 3 + 5 + 25) = (86, 42, 33), so the word is (1,2,3)(2,3,1)(3,1,1).
        // (The source prints the last letter as (3,1,2), which contradicts
        // its own expansion: that word's third track reads 58.)
        let w = DigitWord::new(5, 3, vec![vec![1, 2, 3], vec![2, 3, 1], vec![3, 1, 1]]);
        assert_eq!(w.values(), vec![86, 42, 33]);
        assert_eq!(zip_pad(&[86, 42, 33], 5), w);
        let printed = DigitWord::new(5, 3, vec![vec![1, 2, 3], vec![2, 3, 1], vec![3, 1, 2]]);
        assert_eq!(printed.values(), vec![86, 42, 58]);
    }

    #[test]
    fn empty_word_values_are_zero() {
        assert_eq!(DigitWord::empty(2, 1).values(), vec![0]);
        assert_eq!(DigitWord::empty(3, 2).values(), vec![0, 0]);
        assert_eq!(DigitWord::empty(7, 0).values(), Vec::<u64>::new());
    }

    #[test]
    fn trailing_padding_does_not_change_values() {
        let w = digits(13, 2).pad(1);
        assert_eq!(w.values(), vec![13]);
        assert_eq!(w.strip_padding(), digits(13, 2));
    }

    #[test]
    fn zip_pad_examples() {
        assert_eq!(
            zip_pad(&[1, 2], 2).letters(),
            &[vec![1, 0], vec![0, 1]]
        );
        assert!(zip_pad(&[0, 0], 3).is_empty());
    }

    #[test]
    fn v_p_examples() {
        assert_eq!(v_p(0, 2), 0);
        assert_eq!(v_p(12, 2), 4);
        assert_eq!(v_p(86, 5), 1);
        assert_eq!(v_p(6, 3), 3);
    }

    #[test]
    fn v_p_recurrences() {
        // V_p(p n) = p V_p(n) and V_p(p n + i) = 1 for 0 < i < p.
        for base in [2u32, 3, 5, 10] {
            let p = u64::from(base);
            for n in 0..=10_000u64 {
                assert_eq!(v_p(p * n, base), p * v_p(n, base));
            }
            for n in 0..=1000u64 {
                for i in 1..p {
                    assert_eq!(v_p(p * n + i, base), 1);
                }
            }
        }
    }

    #[test]
    fn digits_round_trip_exhaustive() {
        for base in [2u32, 3, 5, 10] {
            for n in 0..=100_000u64 {
                assert_eq!(digits(n, base).values(), vec![n]);
            }
        }
    }

    proptest! {
        #[test]
        fn zip_pad_round_trips(values in prop::collection::vec(0u64..1 << 40, 0..4),
                               base in prop::sample::select(vec![2u32, 3, 5, 10])) {
            prop_assert_eq!(zip_pad(&values, base).values(), values);
        }

        #[test]
        fn canonical_words_have_no_padding(n in 0u64..1 << 50,
                                           base in prop::sample::select(vec![2u32, 3, 5, 10])) {
            let w = digits(n, base);
            prop_assert_eq!(w.strip_padding(), w);
        }
    }
}
