//! Abstract syntax of first-order formulas over the signature
//! {S, +, 0, V_p, =}, with the measures the state-count audit needs.
//!
//! The parser desugars numerals, `<=`/`<` and scalar multiples, so `Term`
//! and `Formula` only ever contain the official signature. `<->` survives
//! parsing but is rewritten into implications before anything is measured
//! or compiled.

mod flatten;
mod parser;

pub use flatten::{flatten, FlatAtom, FlatFormula};
pub use parser::{parse, ParseError};

use std::collections::BTreeSet;
use std::fmt;

/// A term of the signature. V may be nested freely; it is an ordinary
/// function symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Zero,
    Var(String),
    Succ(Box<Term>),
    Add(Box<Term>, Box<Term>),
    Vp(Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }

    pub fn add(t: Term, s: Term) -> Term {
        Term::Add(Box::new(t), Box::new(s))
    }

    pub fn vp(t: Term) -> Term {
        Term::Vp(Box::new(t))
    }

    /// The numeral S^n(0).
    pub fn numeral(n: u64) -> Term {
        let mut t = Term::Zero;
        for _ in 0..n {
            t = Term::succ(t);
        }
        t
    }

    fn node_count(&self) -> u64 {
        match self {
            Term::Zero | Term::Var(_) => 1,
            Term::Succ(t) | Term::Vp(t) => 1 + t.node_count(),
            Term::Add(t, s) => 1 + t.node_count() + s.node_count(),
        }
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Zero => {}
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Succ(t) | Term::Vp(t) => t.collect_vars(out),
            Term::Add(t, s) => {
                t.collect_vars(out);
                s.collect_vars(out);
            }
        }
    }

    /// When the term is a numeral S^n(0), its value.
    fn as_numeral(&self) -> Option<u64> {
        let mut n = 0u64;
        let mut t = self;
        loop {
            match t {
                Term::Zero => return Some(n),
                Term::Succ(inner) => {
                    n += 1;
                    t = inner;
                }
                _ => return None,
            }
        }
    }
}

/// A first-order formula. `Iff` is parser sugar and is eliminated before
/// measuring or flattening.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(x: &str, f: Formula) -> Formula {
        Formula::Exists(x.to_string(), Box::new(f))
    }

    pub fn forall(x: &str, f: Formula) -> Formula {
        Formula::Forall(x.to_string(), Box::new(f))
    }

    /// Variables with a free occurrence, in canonical (lexicographic)
    /// track order.
    pub fn free_vars(&self) -> Vec<String> {
        let mut free = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut free);
        free.into_iter().collect()
    }

    fn collect_free(&self, bound: &mut Vec<String>, free: &mut BTreeSet<String>) {
        match self {
            Formula::Eq(t, s) => {
                let mut vars = BTreeSet::new();
                t.collect_vars(&mut vars);
                s.collect_vars(&mut vars);
                for v in vars {
                    if !bound.contains(&v) {
                        free.insert(v);
                    }
                }
            }
            Formula::Not(f) => f.collect_free(bound, free),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Imp(a, b)
            | Formula::Iff(a, b) => {
                a.collect_free(bound, free);
                b.collect_free(bound, free);
            }
            Formula::Exists(x, f) | Formula::Forall(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, free);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn has_quantifier(&self) -> bool {
        match self {
            Formula::Eq(..) => false,
            Formula::Not(f) => f.has_quantifier(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Imp(a, b)
            | Formula::Iff(a, b) => a.has_quantifier() || b.has_quantifier(),
            Formula::Exists(..) | Formula::Forall(..) => true,
        }
    }
}

/// Rewrites every `a <-> b` into `(a -> b) & (b -> a)`.
pub fn desugar_iff(f: &Formula) -> Formula {
    match f {
        Formula::Eq(..) => f.clone(),
        Formula::Not(g) => Formula::not(desugar_iff(g)),
        Formula::And(a, b) => Formula::and(desugar_iff(a), desugar_iff(b)),
        Formula::Or(a, b) => Formula::or(desugar_iff(a), desugar_iff(b)),
        Formula::Imp(a, b) => Formula::imp(desugar_iff(a), desugar_iff(b)),
        Formula::Iff(a, b) => {
            let a = desugar_iff(a);
            let b = desugar_iff(b);
            Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
        }
        Formula::Exists(x, g) => Formula::Exists(x.clone(), Box::new(desugar_iff(g))),
        Formula::Forall(x, g) => Formula::Forall(x.clone(), Box::new(desugar_iff(g))),
    }
}

/// The two measures the bound audit is phrased in: the count of binary
/// connectives and quantifiers (negation excluded), and the length of the
/// formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Complexity {
    pub n_connectives: u64,
    /// AST node count of the desugared formula, numerals already expanded
    /// to S-chains.
    pub length: u64,
}

/// Measures a formula; `<->` is rewritten first.
pub fn complexity(f: &Formula) -> Complexity {
    fn go(f: &Formula) -> Complexity {
        match f {
            Formula::Eq(t, s) => Complexity {
                n_connectives: 0,
                length: 1 + t.node_count() + s.node_count(),
            },
            Formula::Not(g) => {
                let c = go(g);
                Complexity { n_connectives: c.n_connectives, length: c.length + 1 }
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                let (ca, cb) = (go(a), go(b));
                Complexity {
                    n_connectives: ca.n_connectives + cb.n_connectives + 1,
                    length: ca.length + cb.length + 1,
                }
            }
            Formula::Iff(..) => unreachable!("iff removed before measuring"),
            Formula::Exists(_, g) | Formula::Forall(_, g) => {
                let c = go(g);
                Complexity { n_connectives: c.n_connectives + 1, length: c.length + 1 }
            }
        }
    }
    go(&desugar_iff(f))
}

// Rendering: text that reparses to the identical AST. Quantified
// subformulas are parenthesized in every operand position so their
// maximal scope cannot leak.

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl Term {
    // prec 0 = sum position, 1 = operand of +
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        if let Some(n) = self.as_numeral() {
            return write!(f, "{n}");
        }
        match self {
            Term::Zero => write!(f, "0"),
            Term::Var(x) => write!(f, "{x}"),
            Term::Succ(t) => write!(f, "S({t})"),
            Term::Vp(t) => write!(f, "V({t})"),
            Term::Add(t, s) => {
                if prec > 0 {
                    write!(f, "(")?;
                }
                t.fmt_prec(f, 0)?;
                write!(f, " + ")?;
                s.fmt_prec(f, 1)?;
                if prec > 0 {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl Formula {
    // Precedence floors: 0 iff, 1 imp, 2 or, 3 and, 4 unary.
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        let paren = |needed: u8| prec > needed;
        match self {
            Formula::Eq(t, s) => {
                if paren(4) {
                    write!(f, "({t} = {s})")
                } else {
                    write!(f, "{t} = {s}")
                }
            }
            Formula::Not(g) => {
                write!(f, "!")?;
                g.fmt_prec(f, 5)
            }
            Formula::And(a, b) => {
                if paren(3) {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 3)?;
                write!(f, " & ")?;
                b.fmt_prec(f, 4)?;
                if paren(3) {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Formula::Or(a, b) => {
                if paren(2) {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 2)?;
                write!(f, " | ")?;
                b.fmt_prec(f, 3)?;
                if paren(2) {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Formula::Imp(a, b) => {
                if paren(1) {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 2)?;
                write!(f, " -> ")?;
                b.fmt_prec(f, 1)?;
                if paren(1) {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Formula::Iff(a, b) => {
                if paren(0) {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 1)?;
                write!(f, " <-> ")?;
                b.fmt_prec(f, 0)?;
                if paren(0) {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Formula::Exists(x, g) | Formula::Forall(x, g) => {
                let q = if matches!(self, Formula::Exists(..)) { "E" } else { "A" };
                if prec > 0 {
                    write!(f, "({q} {x}. ")?;
                    g.fmt_prec(f, 0)?;
                    write!(f, ")")
                } else {
                    write!(f, "{q} {x}. ")?;
                    g.fmt_prec(f, 0)
                }
            }
        }
    }
}
