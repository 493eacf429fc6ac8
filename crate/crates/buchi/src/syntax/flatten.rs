//! Rewriting formulas into the flat atomic form the compiler consumes:
//! atoms are exactly `x = y`, `S(x) = y`, `x + y = z` and `V(x) = y` over
//! pairwise-distinct variables, with no term nesting.
//!
//! The rewrite names every non-variable proper subterm with a fresh
//! existential whose defining atom sits right next to its uses, so track
//! counts stay small during compilation. Zero has no atom of its own:
//! `v = 0` is expressed as `!(E w. S(w) = v)`, which over the naturals
//! holds exactly at 0.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use super::{desugar_iff, Formula, Term};

/// One of the four flat atomic shapes. Constructors check that the
/// variables are pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlatAtom {
    /// x = y
    VarEq(String, String),
    /// S(x) = y
    SuccEq(String, String),
    /// x + y = z
    AddEq(String, String, String),
    /// V(x) = y
    VpEq(String, String),
}

impl FlatAtom {
    pub fn var_eq(x: &str, y: &str) -> FlatAtom {
        assert_ne!(x, y, "flat atom variables must be distinct");
        FlatAtom::VarEq(x.to_string(), y.to_string())
    }

    pub fn succ_eq(x: &str, y: &str) -> FlatAtom {
        assert_ne!(x, y, "flat atom variables must be distinct");
        FlatAtom::SuccEq(x.to_string(), y.to_string())
    }

    pub fn add_eq(x: &str, y: &str, z: &str) -> FlatAtom {
        assert!(x != y && x != z && y != z, "flat atom variables must be distinct");
        FlatAtom::AddEq(x.to_string(), y.to_string(), z.to_string())
    }

    pub fn vp_eq(x: &str, y: &str) -> FlatAtom {
        assert_ne!(x, y, "flat atom variables must be distinct");
        FlatAtom::VpEq(x.to_string(), y.to_string())
    }

    pub fn vars(&self) -> Vec<&str> {
        match self {
            FlatAtom::VarEq(x, y) | FlatAtom::SuccEq(x, y) | FlatAtom::VpEq(x, y) => {
                vec![x, y]
            }
            FlatAtom::AddEq(x, y, z) => vec![x, y, z],
        }
    }

    pub fn distinct(&self) -> bool {
        let vars = self.vars();
        let set: HashSet<&&str> = vars.iter().collect();
        set.len() == vars.len()
    }

    fn to_formula(&self) -> Formula {
        match self {
            FlatAtom::VarEq(x, y) => Formula::Eq(Term::var(x), Term::var(y)),
            FlatAtom::SuccEq(x, y) => Formula::Eq(Term::succ(Term::var(x)), Term::var(y)),
            FlatAtom::AddEq(x, y, z) => {
                Formula::Eq(Term::add(Term::var(x), Term::var(y)), Term::var(z))
            }
            FlatAtom::VpEq(x, y) => Formula::Eq(Term::vp(Term::var(x)), Term::var(y)),
        }
    }
}

/// A formula whose atoms are all flat. Same connective and quantifier
/// shapes as [`Formula`], minus `<->`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlatFormula {
    Atom(FlatAtom),
    Not(Box<FlatFormula>),
    And(Box<FlatFormula>, Box<FlatFormula>),
    Or(Box<FlatFormula>, Box<FlatFormula>),
    Imp(Box<FlatFormula>, Box<FlatFormula>),
    Exists(String, Box<FlatFormula>),
    Forall(String, Box<FlatFormula>),
}

impl FlatFormula {
    pub fn not(f: FlatFormula) -> FlatFormula {
        FlatFormula::Not(Box::new(f))
    }

    pub fn and(a: FlatFormula, b: FlatFormula) -> FlatFormula {
        FlatFormula::And(Box::new(a), Box::new(b))
    }

    pub fn exists(x: String, f: FlatFormula) -> FlatFormula {
        FlatFormula::Exists(x, Box::new(f))
    }

    /// Free variables in canonical (lexicographic) track order.
    pub fn free_vars(&self) -> Vec<String> {
        let mut free = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut free);
        free.into_iter().collect()
    }

    fn collect_free(&self, bound: &mut Vec<String>, free: &mut BTreeSet<String>) {
        match self {
            FlatFormula::Atom(a) => {
                for v in a.vars() {
                    if !bound.iter().any(|b| b == v) {
                        free.insert(v.to_string());
                    }
                }
            }
            FlatFormula::Not(f) => f.collect_free(bound, free),
            FlatFormula::And(a, b) | FlatFormula::Or(a, b) | FlatFormula::Imp(a, b) => {
                a.collect_free(bound, free);
                b.collect_free(bound, free);
            }
            FlatFormula::Exists(x, f) | FlatFormula::Forall(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, free);
                bound.pop();
            }
        }
    }

    /// Count of binary connectives and quantifiers; negation excluded.
    pub fn n_connectives(&self) -> u64 {
        match self {
            FlatFormula::Atom(_) => 0,
            FlatFormula::Not(f) => f.n_connectives(),
            FlatFormula::And(a, b) | FlatFormula::Or(a, b) | FlatFormula::Imp(a, b) => {
                a.n_connectives() + b.n_connectives() + 1
            }
            FlatFormula::Exists(_, f) | FlatFormula::Forall(_, f) => f.n_connectives() + 1,
        }
    }

    /// Every atom has pairwise-distinct variables.
    pub fn atoms_distinct(&self) -> bool {
        match self {
            FlatFormula::Atom(a) => a.distinct(),
            FlatFormula::Not(f) => f.atoms_distinct(),
            FlatFormula::And(a, b) | FlatFormula::Or(a, b) | FlatFormula::Imp(a, b) => {
                a.atoms_distinct() && b.atoms_distinct()
            }
            FlatFormula::Exists(_, f) | FlatFormula::Forall(_, f) => f.atoms_distinct(),
        }
    }

    /// The same formula as an ordinary [`Formula`] (atoms spelled out).
    pub fn to_formula(&self) -> Formula {
        match self {
            FlatFormula::Atom(a) => a.to_formula(),
            FlatFormula::Not(f) => Formula::not(f.to_formula()),
            FlatFormula::And(a, b) => Formula::and(a.to_formula(), b.to_formula()),
            FlatFormula::Or(a, b) => Formula::or(a.to_formula(), b.to_formula()),
            FlatFormula::Imp(a, b) => Formula::imp(a.to_formula(), b.to_formula()),
            FlatFormula::Exists(x, f) => Formula::Exists(x.clone(), Box::new(f.to_formula())),
            FlatFormula::Forall(x, f) => Formula::Forall(x.clone(), Box::new(f.to_formula())),
        }
    }
}

impl fmt::Display for FlatFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

struct Fresh {
    used: HashSet<String>,
    counter: usize,
}

impl Fresh {
    fn next(&mut self) -> String {
        loop {
            let name = format!("v{}", self.counter);
            self.counter += 1;
            if self.used.insert(name.clone()) {
                return name;
            }
        }
    }
}

/// Rewrites a formula into flat atomic form. The result is logically
/// equivalent over the naturals, `<->` has been eliminated, bound
/// variables are renamed apart, and fresh existentials name subterm
/// values.
pub fn flatten(formula: &Formula) -> FlatFormula {
    let formula = desugar_iff(formula);
    let mut fresh = Fresh { used: collect_idents(&formula), counter: 0 };
    let renamed = rename_bound(&formula, &HashMap::new(), &mut fresh);
    go(&renamed, &mut fresh)
}

fn collect_idents(f: &Formula) -> HashSet<String> {
    fn term(t: &Term, out: &mut HashSet<String>) {
        match t {
            Term::Zero => {}
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Succ(t) | Term::Vp(t) => term(t, out),
            Term::Add(a, b) => {
                term(a, out);
                term(b, out);
            }
        }
    }
    fn walk(f: &Formula, out: &mut HashSet<String>) {
        match f {
            Formula::Eq(t, s) => {
                term(t, out);
                term(s, out);
            }
            Formula::Not(g) => walk(g, out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Imp(a, b)
            | Formula::Iff(a, b) => {
                walk(a, out);
                walk(b, out);
            }
            Formula::Exists(x, g) | Formula::Forall(x, g) => {
                out.insert(x.clone());
                walk(g, out);
            }
        }
    }
    let mut out = HashSet::new();
    walk(f, &mut out);
    out
}

fn rename_bound(f: &Formula, env: &HashMap<String, String>, fresh: &mut Fresh) -> Formula {
    fn term(t: &Term, env: &HashMap<String, String>) -> Term {
        match t {
            Term::Zero => Term::Zero,
            Term::Var(x) => Term::Var(env.get(x).cloned().unwrap_or_else(|| x.clone())),
            Term::Succ(t) => Term::succ(term(t, env)),
            Term::Vp(t) => Term::vp(term(t, env)),
            Term::Add(a, b) => Term::add(term(a, env), term(b, env)),
        }
    }
    match f {
        Formula::Eq(t, s) => Formula::Eq(term(t, env), term(s, env)),
        Formula::Not(g) => Formula::not(rename_bound(g, env, fresh)),
        Formula::And(a, b) => {
            Formula::and(rename_bound(a, env, fresh), rename_bound(b, env, fresh))
        }
        Formula::Or(a, b) => {
            Formula::or(rename_bound(a, env, fresh), rename_bound(b, env, fresh))
        }
        Formula::Imp(a, b) => {
            Formula::imp(rename_bound(a, env, fresh), rename_bound(b, env, fresh))
        }
        Formula::Iff(..) => unreachable!("iff removed before renaming"),
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            let new = fresh.next();
            let mut inner = env.clone();
            inner.insert(x.clone(), new.clone());
            let body = rename_bound(g, &inner, fresh);
            if matches!(f, Formula::Exists(..)) {
                Formula::Exists(new, Box::new(body))
            } else {
                Formula::Forall(new, Box::new(body))
            }
        }
    }
}

fn go(f: &Formula, fresh: &mut Fresh) -> FlatFormula {
    match f {
        Formula::Eq(t, s) => flat_eq(t, s, fresh),
        Formula::Not(g) => FlatFormula::not(go(g, fresh)),
        Formula::And(a, b) => FlatFormula::and(go(a, fresh), go(b, fresh)),
        Formula::Or(a, b) => FlatFormula::Or(Box::new(go(a, fresh)), Box::new(go(b, fresh))),
        Formula::Imp(a, b) => FlatFormula::Imp(Box::new(go(a, fresh)), Box::new(go(b, fresh))),
        Formula::Iff(..) => unreachable!("iff removed before flattening"),
        Formula::Exists(x, g) => FlatFormula::Exists(x.clone(), Box::new(go(g, fresh))),
        Formula::Forall(x, g) => FlatFormula::Forall(x.clone(), Box::new(go(g, fresh))),
    }
}

/// `v = 0`, expressed without a zero atom: nothing has successor v.
fn zero_test(v: &str, fresh: &mut Fresh) -> FlatFormula {
    let w = fresh.next();
    FlatFormula::not(FlatFormula::exists(
        w.clone(),
        FlatFormula::Atom(FlatAtom::succ_eq(&w, v)),
    ))
}

fn flat_eq(t: &Term, s: &Term, fresh: &mut Fresh) -> FlatFormula {
    match (t, s) {
        (Term::Var(x), Term::Var(y)) if x != y => FlatFormula::Atom(FlatAtom::var_eq(x, y)),
        (Term::Var(x), Term::Var(_)) => {
            // x = x: trivially true, kept flat as E u. x = u.
            let u = fresh.next();
            FlatFormula::exists(u.clone(), FlatFormula::Atom(FlatAtom::var_eq(x, &u)))
        }
        (Term::Zero, Term::Zero) => {
            // 0 = 0: trivially true, kept flat as E u. u = 0.
            let u = fresh.next();
            let test = zero_test(&u, fresh);
            FlatFormula::exists(u, test)
        }
        (Term::Var(x), Term::Zero) | (Term::Zero, Term::Var(x)) => zero_test(x, fresh),
        (Term::Var(x), other) | (other, Term::Var(x)) => define(other, x, fresh),
        (lhs, rhs) => {
            // Both sides are compound: name a shared value.
            let r = fresh.next();
            let left = define(lhs, &r, fresh);
            let right = define(rhs, &r, fresh);
            FlatFormula::exists(r, FlatFormula::and(left, right))
        }
    }
}

/// A flat formula asserting that the (non-variable) term evaluates to the
/// variable `target`.
fn define(t: &Term, target: &str, fresh: &mut Fresh) -> FlatFormula {
    match t {
        Term::Var(_) => unreachable!("define is called on compound terms"),
        Term::Zero => zero_test(target, fresh),
        Term::Succ(arg) => define_unary(arg, target, fresh, FlatAtom::succ_eq),
        Term::Vp(arg) => define_unary(arg, target, fresh, FlatAtom::vp_eq),
        Term::Add(a, b) => {
            // Resolve both operands to variable names, wrapping
            // definitions for compound ones, then fix any collisions by
            // aliasing through fresh variables.
            let mut wrappers: Vec<(String, FlatFormula)> = Vec::new();
            let resolve = |term: &Term, fresh: &mut Fresh, wrappers: &mut Vec<(String, FlatFormula)>| match term {
                Term::Var(x) => x.clone(),
                other => {
                    let u = fresh.next();
                    let d = define(other, &u, fresh);
                    wrappers.push((u.clone(), d));
                    u
                }
            };
            let mut na = resolve(a, fresh, &mut wrappers);
            let mut nb = resolve(b, fresh, &mut wrappers);
            if na == nb {
                let u = fresh.next();
                wrappers.push((u.clone(), FlatFormula::Atom(FlatAtom::var_eq(&nb, &u))));
                nb = u;
            }
            if na == target {
                let u = fresh.next();
                wrappers.push((u.clone(), FlatFormula::Atom(FlatAtom::var_eq(&na, &u))));
                na = u;
            }
            if nb == target {
                let u = fresh.next();
                wrappers.push((u.clone(), FlatFormula::Atom(FlatAtom::var_eq(&nb, &u))));
                nb = u;
            }
            let mut out = FlatFormula::Atom(FlatAtom::add_eq(&na, &nb, target));
            for (var, def) in wrappers.into_iter().rev() {
                out = FlatFormula::exists(var, FlatFormula::and(def, out));
            }
            out
        }
    }
}

fn define_unary(
    arg: &Term,
    target: &str,
    fresh: &mut Fresh,
    atom: fn(&str, &str) -> FlatAtom,
) -> FlatFormula {
    match arg {
        Term::Var(x) if x != target => FlatFormula::Atom(atom(x, target)),
        Term::Var(x) => {
            // S(x) = x or V(x) = x shapes: alias the argument.
            let u = fresh.next();
            FlatFormula::exists(
                u.clone(),
                FlatFormula::and(
                    FlatFormula::Atom(FlatAtom::var_eq(x, &u)),
                    FlatFormula::Atom(atom(&u, target)),
                ),
            )
        }
        other => {
            let u = fresh.next();
            let d = define(other, &u, fresh);
            FlatFormula::exists(
                u.clone(),
                FlatFormula::and(d, FlatFormula::Atom(atom(&u, target))),
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{complexity, parse};

    fn flat(text: &str) -> FlatFormula {
        flatten(&parse(text).unwrap())
    }

    #[test]
    fn atoms_stay_atoms() {
        assert_eq!(
            flat("x = y"),
            FlatFormula::Atom(FlatAtom::var_eq("x", "y"))
        );
        assert_eq!(
            flat("S(x) = y"),
            FlatFormula::Atom(FlatAtom::succ_eq("x", "y"))
        );
        assert_eq!(
            flat("x + y = z"),
            FlatFormula::Atom(FlatAtom::add_eq("x", "y", "z"))
        );
        assert_eq!(
            flat("V(x) = y"),
            FlatFormula::Atom(FlatAtom::vp_eq("x", "y"))
        );
    }

    #[test]
    fn nested_term_gets_named() {
        // V(x + y) = z introduces one name for the sum.
        let f = flat("V(x + y) = z");
        let expected = FlatFormula::exists(
            "v0".to_string(),
            FlatFormula::and(
                FlatFormula::Atom(FlatAtom::add_eq("x", "y", "v0")),
                FlatFormula::Atom(FlatAtom::vp_eq("v0", "z")),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn free_vars_survive_flattening() {
        for text in ["V(x + y) = z", "E y. x + y = y", "S(S(0)) = x", "x = x"] {
            let f = parse(text).unwrap();
            assert_eq!(flatten(&f).free_vars(), f.free_vars(), "{text}");
        }
    }

    #[test]
    fn flat_atoms_always_distinct() {
        let cases = [
            "x = x",
            "x + x = x",
            "S(x) = x",
            "V(x) = x",
            "x + 0 = x",
            "S(S(0)) = x",
            "2*x = x + x",
            "V(x + x) = x",
            "x <= 5 | 10 <= x",
            "A x. (V(x) = x -> !(E y. (x < y & y < x + x & V(y) = y)))",
            "0 = 0",
            "x = 8",
        ];
        for text in cases {
            let f = flat(text);
            assert!(f.atoms_distinct(), "non-distinct atom in flattening of {text}");
        }
    }

    #[test]
    fn bound_variables_are_renamed_apart() {
        let f = flat("(E y. x = y) & (E y. y = x)");
        // Both binders got fresh names, so no two quantifiers share one.
        fn binders(f: &FlatFormula, out: &mut Vec<String>) {
            match f {
                FlatFormula::Atom(_) => {}
                FlatFormula::Not(g) => binders(g, out),
                FlatFormula::And(a, b) | FlatFormula::Or(a, b) | FlatFormula::Imp(a, b) => {
                    binders(a, out);
                    binders(b, out);
                }
                FlatFormula::Exists(x, g) | FlatFormula::Forall(x, g) => {
                    out.push(x.clone());
                    binders(g, out);
                }
            }
        }
        let mut names = Vec::new();
        binders(&f, &mut names);
        let unique: std::collections::HashSet<_> = names.iter().collect();
        assert_eq!(unique.len(), names.len());
    }

    #[test]
    fn connective_count_against_length() {
        // The audited side-claim: flat connectives stay within the
        // original length. Holds for numeral-free formulas.
        for text in ["x = y", "V(x + y) = z", "x = 0", "x < y", "x + x = x"] {
            let f = parse(text).unwrap();
            assert!(
                flatten(&f).n_connectives() <= complexity(&f).length,
                "claim fails for {text}"
            );
        }
        // Numeral chains break it: each successor step in the chain costs
        // a quantifier and a conjunction against one node of length. The
        // audit reports such violations instead of hiding them.
        let f = parse("x = 8").unwrap();
        assert!(flatten(&f).n_connectives() > complexity(&f).length);
    }
}
