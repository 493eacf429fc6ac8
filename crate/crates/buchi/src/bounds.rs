//! Exact-or-symbolic arithmetic for the iterated exponent 2_m^k and the
//! scheme bound p^(2_m^3).
//!
//! Values of this shape overflow machine words (and any feasible bignum)
//! almost immediately, so [`TowerInt`] keeps a value exact while it fits
//! below a materialization cutoff and switches to a symbolic power above it.
//! Comparisons stay exact in either representation.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Values below this are kept as exact integers; at or above it a power
/// stays symbolic.
pub const MATERIALIZE_CUTOFF_BITS: u64 = 64;

// Internal budget for exact comparisons: a value is materialized for a
// comparison only while it fits in this many bits.
const CMP_BUDGET_BITS: u64 = 1 << 22;

/// A nonnegative integer that is either exact or a symbolic power
/// `base^exponent` with `base >= 2` and a `TowerInt` exponent.
///
/// Canonical form: a power whose value fits below the cutoff is
/// materialized to `Exact`, so symbolic towers always denote values of at
/// least 2^64. The representation is private; use the constructors.
#[derive(Clone, Debug)]
pub struct TowerInt(Repr);

#[derive(Clone, Debug)]
enum Repr {
    Exact(BigUint),
    Tower { base: u64, exponent: Box<TowerInt> },
}

/// Signalled by [`TowerInt::to_exact`] when the value lies above the
/// materialization cutoff; carries the symbolic form.
#[derive(Debug, Clone, Error)]
#[error("value exceeds the materialization cutoff: {0}")]
pub struct TowerOverflow(pub TowerInt);

impl TowerInt {
    pub fn exact<T: Into<BigUint>>(value: T) -> Self {
        TowerInt(Repr::Exact(value.into()))
    }

    /// `base^exponent`, canonicalized: materialized when the value fits
    /// below the cutoff, symbolic otherwise.
    pub fn pow(base: u64, exponent: TowerInt) -> Self {
        assert!(base >= 2, "tower base must be at least 2");
        match &exponent.0 {
            Repr::Exact(e) => {
                // base^e < 2^64 forces e <= 64; in that range compute exactly.
                if let Some(e) = e.to_u64() {
                    if e <= MATERIALIZE_CUTOFF_BITS {
                        let value = BigUint::from(base).pow(e as u32);
                        if value.bits() <= MATERIALIZE_CUTOFF_BITS {
                            return TowerInt(Repr::Exact(value));
                        }
                    }
                }
                TowerInt(Repr::Tower {
                    base,
                    exponent: Box::new(exponent),
                })
            }
            // A canonical tower exponent is already >= 2^64.
            Repr::Tower { .. } => TowerInt(Repr::Tower {
                base,
                exponent: Box::new(exponent),
            }),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.0, Repr::Exact(_))
    }

    /// The exact value, when it lies below the materialization cutoff.
    pub fn to_exact(&self) -> Result<BigUint, TowerOverflow> {
        self.materialize(MATERIALIZE_CUTOFF_BITS)
            .ok_or_else(|| TowerOverflow(self.clone()))
    }

    /// The exact value provided it fits in `max_bits` bits, else `None`.
    /// Exact in both directions: `Some` iff the value has at most
    /// `max_bits` bits.
    pub fn materialize(&self, max_bits: u64) -> Option<BigUint> {
        match &self.0 {
            Repr::Exact(v) => (v.bits() <= max_bits).then(|| v.clone()),
            Repr::Tower { base, exponent } => {
                // bits(base^e) >= e + 1, so e must fit comfortably in u64.
                let e = exponent.materialize(64)?.to_u64()?;
                if e > max_bits {
                    return None;
                }
                let width = u64::from(u64::BITS - base.leading_zeros());
                // Cheap upper estimate first so we never build an
                // unreasonably large power just to reject it.
                if e.checked_mul(width)? > max_bits.saturating_mul(2) {
                    return None;
                }
                let v = BigUint::from(*base).pow(u32::try_from(e).ok()?);
                (v.bits() <= max_bits).then_some(v)
            }
        }
    }

    pub fn cmp_value(&self, other: &TowerInt) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Exact(a), Repr::Exact(b)) => a.cmp(b),
            (Repr::Exact(a), Repr::Tower { base, exponent }) => {
                cmp_exact_vs_power(a, *base, exponent)
            }
            (Repr::Tower { base, exponent }, Repr::Exact(b)) => {
                cmp_exact_vs_power(b, *base, exponent).reverse()
            }
            (
                Repr::Tower { base: b1, exponent: e1 },
                Repr::Tower { base: b2, exponent: e2 },
            ) => cmp_power_vs_power(*b1, e1, *b2, e2),
        }
    }
}

/// The iterated exponent of two: height 0 gives `top`, and each further
/// level raises 2 to the previous value.
pub fn iterated_exp2(height: u64, top: u64) -> TowerInt {
    let mut t = TowerInt::exact(top);
    for _ in 0..height {
        t = TowerInt::pow(2, t);
    }
    t
}

/// The witness-scheme bound `p^(2_length^3)` for a formula of the given
/// length.
pub fn scheme_bound(base: u64, length: u64) -> TowerInt {
    TowerInt::pow(base, iterated_exp2(length, 3))
}

fn big_bits(x: &BigUint) -> u64 {
    x.bits()
}

/// Compare an exact integer against `base^e`.
fn cmp_exact_vs_power(x: &BigUint, base: u64, e: &TowerInt) -> Ordering {
    let xbits = big_bits(x);
    // base^e >= 2^e > x whenever e >= bits(x), since x < 2^bits(x).
    if e.cmp_value(&TowerInt::exact(xbits)) != Ordering::Less {
        return Ordering::Less;
    }
    // Now e's value is below bits(x) and therefore fits in u64.
    let ev = e
        .materialize(64)
        .and_then(|v| v.to_u64())
        .expect("exponent below a bit count must fit in u64");
    let width = u64::from(u64::BITS - base.leading_zeros());
    if ev.saturating_mul(width) <= CMP_BUDGET_BITS || ev.saturating_mul(width) <= xbits * 2 {
        let p = BigUint::from(base).pow(u32::try_from(ev).expect("small exponent"));
        return x.cmp(&p);
    }
    // Separate by bit bands: 2^(ev*(width-1)) <= base^ev < 2^(ev*width).
    if ev.saturating_mul(width - 1) >= xbits {
        return Ordering::Less;
    }
    if ev.saturating_mul(width) < xbits {
        return Ordering::Greater;
    }
    unreachable!("band always resolves once ev*width is comparable to bits(x)")
}

/// Largest k with `b = root^k`; returns the primitive root and k.
fn primitive_root(b: u64) -> (u64, u64) {
    debug_assert!(b >= 2);
    for k in (2..=63u32).rev() {
        let mut r = 2u64;
        loop {
            match r.checked_pow(k) {
                Some(p) if p < b => r += 1,
                Some(p) if p == b => return (r, u64::from(k)),
                _ => break,
            }
        }
    }
    (b, 1)
}

fn floor_log2(b: u64) -> u64 {
    u64::from(63 - b.leading_zeros())
}

/// Compare `b1^e1` against `b2^e2` exactly.
fn cmp_power_vs_power(b1: u64, e1: &TowerInt, b2: u64, e2: &TowerInt) -> Ordering {
    let t1 = || TowerInt::pow(b1, e1.clone());
    let t2 = || TowerInt::pow(b2, e2.clone());
    if let (Some(a), Some(b)) = (t1().materialize(CMP_BUDGET_BITS), t2().materialize(CMP_BUDGET_BITS)) {
        return a.cmp(&b);
    }
    let (c1, i1) = primitive_root(b1);
    let (c2, i2) = primitive_root(b2);
    if c1 == c2 {
        // c^(i1*e1) vs c^(i2*e2): compare the scaled exponents.
        return cmp_scaled(i1, e1, i2, e2);
    }
    // Bit-band separation: log2(b^e) lies in [e*l, e*(l+1)] for l = floor(log2 b).
    let (l1, l2) = (floor_log2(b1), floor_log2(b2));
    if cmp_scaled(l1 + 1, e1, l2.max(1), e2) == Ordering::Less {
        return Ordering::Less;
    }
    if cmp_scaled(l1.max(1), e1, l2 + 1, e2) == Ordering::Greater {
        return Ordering::Greater;
    }
    // Overlapping bands with distinct primitive bases: decide with
    // fixed-point logarithms. Exact equality is impossible here.
    let ev1 = e1
        .materialize(CMP_BUDGET_BITS)
        .unwrap_or_else(|| panic!("comparison beyond supported precision: {b1}^({e1}) vs {b2}^({e2})"));
    let ev2 = e2
        .materialize(CMP_BUDGET_BITS)
        .unwrap_or_else(|| panic!("comparison beyond supported precision: {b1}^({e1}) vs {b2}^({e2})"));
    for prec in [128u64, 512, 2048, 8192] {
        let (lo1, hi1) = log2_fixed(b1, prec);
        let (lo2, hi2) = log2_fixed(b2, prec);
        let a_lo = &ev1 * &lo1;
        let a_hi = &ev1 * &hi1;
        let b_lo = &ev2 * &lo2;
        let b_hi = &ev2 * &hi2;
        if a_hi < b_lo {
            return Ordering::Less;
        }
        if b_hi < a_lo {
            return Ordering::Greater;
        }
    }
    panic!("comparison beyond supported precision: {b1}^({e1}) vs {b2}^({e2})");
}

/// Compare `i*e` against `j*f` for small positive scalars.
fn cmp_scaled(i: u64, e: &TowerInt, j: u64, f: &TowerInt) -> Ordering {
    match (&e.0, &f.0) {
        (Repr::Exact(a), Repr::Exact(b)) => (a * i).cmp(&(b * j)),
        (Repr::Exact(a), Repr::Tower { .. }) => {
            if let Some(fv) = f.materialize(CMP_BUDGET_BITS) {
                return (a * i).cmp(&(fv * j));
            }
            // f's value needs more than the budget in bits; i*a is tiny
            // against it for any exact value this crate produces.
            assert!(
                big_bits(a) + 7 < CMP_BUDGET_BITS,
                "comparison beyond supported precision"
            );
            Ordering::Less
        }
        (Repr::Tower { .. }, Repr::Exact(_)) => cmp_scaled(j, f, i, e).reverse(),
        (Repr::Tower { .. }, Repr::Tower { .. }) => {
            if let (Some(a), Some(b)) = (e.materialize(CMP_BUDGET_BITS), f.materialize(CMP_BUDGET_BITS)) {
                return (a * i).cmp(&(b * j));
            }
            match e.cmp_value(f) {
                Ordering::Equal => i.cmp(&j),
                // The values are distinct powers beyond the comparison
                // budget; their gap dwarfs any factor of at most 2^6.
                ord => ord,
            }
        }
    }
}

/// Rigorous integer bounds `(lo, hi)` on `2^prec * log2(b)`.
fn log2_fixed(b: u64, prec: u64) -> (BigUint, BigUint) {
    let l = floor_log2(b);
    let frac_bits = prec + 32;
    // y in [1, 2) as fixed point with frac_bits fraction bits; exact start.
    let mut y_lo = BigUint::from(b) << frac_bits >> l;
    let mut y_hi = y_lo.clone();
    let one = BigUint::one() << frac_bits;
    let two = &one << 1u32;
    let mut bits_lo = BigUint::zero();
    let mut bits_hi = BigUint::zero();
    let mut diverged = false;
    for _ in 0..prec {
        bits_lo <<= 1u32;
        bits_hi <<= 1u32;
        if diverged {
            bits_hi += 1u32;
            continue;
        }
        y_lo = (&y_lo * &y_lo) >> frac_bits;
        y_hi = ((&y_hi * &y_hi) >> frac_bits) + 1u32;
        let lo_ge_2 = y_lo >= two;
        let hi_ge_2 = y_hi >= two;
        if lo_ge_2 && hi_ge_2 {
            bits_lo += 1u32;
            bits_hi += 1u32;
            y_lo >>= 1u32;
            y_hi = (y_hi >> 1u32) + 1u32;
        } else if !lo_ge_2 && !hi_ge_2 {
            // next bit is 0 for both bounds
        } else {
            // The interval straddles 2: this bit is unknown; pad the
            // remaining bits pessimistically.
            diverged = true;
            bits_hi += 1u32;
        }
        if y_hi >= &two << 1u32 {
            diverged = true;
        }
    }
    let base = BigUint::from(l) << prec;
    (&base + bits_lo, base + bits_hi + 1u32)
}

impl PartialEq for TowerInt {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl Eq for TowerInt {}

impl PartialOrd for TowerInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl Ord for TowerInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}

impl fmt::Display for TowerInt {
    /// Exact decimal when materialized; otherwise power notation, with
    /// chains of 2s compressed to the iterated-exponent form `2_m^k`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Exact(v) => write!(f, "{v}"),
            Repr::Tower { base, exponent } => {
                if *base == 2 {
                    // Count the depth of the all-2 chain down to an exact core.
                    let mut depth = 1u64;
                    let mut core = exponent.as_ref();
                    while let Repr::Tower { base: 2, exponent } = &core.0 {
                        depth += 1;
                        core = exponent;
                    }
                    if let (Repr::Exact(k), true) = (&core.0, depth >= 2) {
                        return write!(f, "2_{depth}^{k}");
                    }
                }
                match &exponent.0 {
                    Repr::Exact(e) => write!(f, "{base}^{e}"),
                    _ => write!(f, "{base}^({exponent})"),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn exact_u128(v: u128) -> TowerInt {
        TowerInt::exact(BigUint::from(v))
    }

    #[test]
    fn iterated_exp2_base_case() {
        assert_eq!(iterated_exp2(0, 3), TowerInt::exact(3u64));
        assert_eq!(iterated_exp2(0, 0), TowerInt::exact(0u64));
    }

    #[test]
    fn iterated_exp2_small_values() {
        // 2_1^3 = 8, 2_2^3 = 2^8 = 256: derived by direct evaluation.
        assert_eq!(iterated_exp2(1, 3), TowerInt::exact(8u64));
        assert_eq!(iterated_exp2(2, 3), TowerInt::exact(256u64));
    }

    #[test]
    fn iterated_exp2_goes_symbolic_past_the_cutoff() {
        // 2_3^3 = 2^256 exceeds 2^64, so it stays a symbolic power.
        let t = iterated_exp2(3, 3);
        assert!(!t.is_exact());
        assert_eq!(t, TowerInt::pow(2, TowerInt::exact(256u64)));
        assert_eq!(
            t,
            TowerInt::exact(BigUint::from(2u32).pow(256).clone())
        );
    }

    #[test]
    fn tower_recurrence_exact_up_to_height_four() {
        // 2_(m+1)^k = 2^(2_m^k), compared exactly.
        for m in 0..=3u64 {
            for k in 0..=4u64 {
                let step = TowerInt::pow(2, iterated_exp2(m, k));
                assert_eq!(step, iterated_exp2(m + 1, k), "m={m} k={k}");
            }
        }
    }

    #[test]
    fn scheme_bound_small_lengths() {
        // p=2, length 0: 2^3 = 8; length 1: 2^8 = 256.
        assert_eq!(scheme_bound(2, 0), TowerInt::exact(8u64));
        assert_eq!(scheme_bound(2, 1), TowerInt::exact(256u64));
        // p=10, length 5 is far past any cutoff and stays symbolic.
        let b = scheme_bound(10, 5);
        assert!(!b.is_exact());
        assert_eq!(b, TowerInt::pow(10, iterated_exp2(5, 3)));
    }

    #[test]
    fn cmp_examples() {
        assert_eq!(
            TowerInt::exact(8u64).cmp_value(&iterated_exp2(1, 3)),
            Ordering::Equal
        );
        assert_eq!(
            iterated_exp2(2, 3).cmp_value(&iterated_exp2(3, 3)),
            Ordering::Less
        );
    }

    #[test]
    fn to_exact_overflows_loudly() {
        let t = TowerInt::pow(2, TowerInt::exact(256u64));
        let err = t.to_exact().unwrap_err();
        assert_eq!(err.0, t);
        assert_eq!(TowerInt::exact(255u64).to_exact().unwrap(), BigUint::from(255u32));
        // 2^63 still materializes; 2^64 does not.
        assert!(TowerInt::pow(2, TowerInt::exact(63u64)).to_exact().is_ok());
        assert!(TowerInt::pow(2, TowerInt::exact(64u64)).to_exact().is_err());
    }

    #[test]
    fn value_equality_across_representations() {
        // 4^32 = 2^64: same value, different structure.
        let a = TowerInt::pow(4, TowerInt::exact(32u64));
        let b = TowerInt::pow(2, TowerInt::exact(64u64));
        assert_eq!(a, b);
        // 3^41 < 2^65 < 2^66.
        assert!(TowerInt::pow(3, TowerInt::exact(41u64)) < TowerInt::pow(2, TowerInt::exact(65u64)));
        assert!(TowerInt::pow(3, TowerInt::exact(42u64)) > TowerInt::pow(2, TowerInt::exact(66u64)));
    }

    #[test]
    fn deep_towers_compare() {
        // 2^(2^256) vs 2^(2^257) and the same value cross-base.
        let a = TowerInt::pow(2, TowerInt::pow(2, TowerInt::exact(256u64)));
        let b = TowerInt::pow(2, TowerInt::pow(2, TowerInt::exact(257u64)));
        assert!(a < b);
        let c = TowerInt::pow(4, TowerInt::pow(2, TowerInt::exact(255u64)));
        assert_eq!(a, c);
        assert!(TowerInt::pow(3, TowerInt::pow(3, TowerInt::exact(200u64))) > a.clone());
    }

    #[test]
    fn display_notation() {
        assert_eq!(iterated_exp2(2, 3).to_string(), "256");
        assert_eq!(iterated_exp2(3, 3).to_string(), "2^256");
        assert_eq!(iterated_exp2(4, 3).to_string(), "2_2^256");
        assert_eq!(scheme_bound(10, 5).to_string(), "10^(2_3^256)");
        assert_eq!(TowerInt::pow(10, TowerInt::exact(77u64)).to_string(), "10^77");
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(64), (2, 6));
        assert_eq!(primitive_root(36), (6, 2));
        assert_eq!(primitive_root(10), (10, 1));
        assert_eq!(primitive_root(27), (3, 3));
    }

    fn tower_strategy() -> impl Strategy<Value = TowerInt> {
        let exact = any::<u128>().prop_map(exact_u128);
        let base = prop::sample::select(vec![2u64, 3, 4, 5, 8, 9, 10, 16, 27]);
        let lvl1 = (base.clone(), any::<u32>()).prop_map(|(b, e)| {
            TowerInt::pow(b, TowerInt::exact(u64::from(e)))
        });
        let lvl2 = (base, prop::sample::select(vec![2u64, 3, 5, 10]), 0u64..5000).prop_map(
            |(b, b2, e)| TowerInt::pow(b, TowerInt::pow(b2, TowerInt::exact(e))),
        );
        prop_oneof![exact, lvl1, lvl2]
    }

    proptest! {
        #[test]
        fn cmp_is_antisymmetric(a in tower_strategy(), b in tower_strategy()) {
            prop_assert_eq!(a.cmp_value(&b), b.cmp_value(&a).reverse());
        }

        #[test]
        fn cmp_is_transitive(a in tower_strategy(), b in tower_strategy(), c in tower_strategy()) {
            let mut v = [a, b, c];
            v.sort();
            prop_assert!(v[0] <= v[1] && v[1] <= v[2] && v[0] <= v[2]);
        }

        #[test]
        fn pow_is_monotone_in_the_exponent(e in 0u64..10_000, d in 1u64..10_000) {
            let small = TowerInt::pow(2, TowerInt::exact(e));
            let large = TowerInt::pow(2, TowerInt::exact(e + d));
            prop_assert!(small < large);
        }
    }
}
