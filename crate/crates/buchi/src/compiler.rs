//! Recursive compilation of flat formulas to padding-closed deterministic
//! automata, one track per free variable (in lexicographic order), with a
//! per-node audit of the iterated-exponential state bound.
//!
//! The induction: atoms come from the base automata; negation flips the
//! accepting set; conjunction cylindrifies both sides to the union of
//! their free variables and intersects; disjunction and implication are
//! reduced through De Morgan so the audit matches the product accounting;
//! an existential projects its track, zero-saturates to restore padding
//! closure, and determinizes; a universal dualizes through negation.
//!
//! In audit mode nothing is minimized and every node's state count is
//! checked against 2_N^3, where N counts the node's binary connectives
//! and quantifiers. With the audit off, the automaton is minimized after
//! every step instead.

use std::fmt::Write as _;

use thiserror::Error;

use crate::automata::MultiTrackAutomaton;
use crate::base_automata::{add_automaton, eq_automaton, succ_automaton, v_automaton};
use crate::bounds::{iterated_exp2, TowerInt};
use crate::encoding::zip_pad;
use crate::syntax::{flatten, FlatAtom, FlatFormula, Formula};

#[derive(Debug, Clone, Error)]
pub enum CompileError {
    #[error("formula is not a sentence; free variables: {}", .0.join(", "))]
    OpenFormula(Vec<String>),
}

/// Per-node compilation statistics: the connective/quantifier count, the
/// automaton size after the node's construction, and the audited bound
/// 2_N^3.
#[derive(Debug, Clone)]
pub struct CompileReport {
    pub fragment: String,
    pub n_connectives: u64,
    pub states: usize,
    pub bound: TowerInt,
    pub bound_ok: bool,
    pub children: Vec<CompileReport>,
}

impl CompileReport {
    /// Whether the state bound holds at this node and every descendant.
    pub fn all_ok(&self) -> bool {
        self.bound_ok && self.children.iter().all(CompileReport::all_ok)
    }

    /// All nodes of the tree, parent before children.
    pub fn nodes(&self) -> Vec<&CompileReport> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.nodes());
        }
        out
    }

    /// Indented text rendering of the report tree.
    pub fn to_text(&self) -> String {
        fn go(node: &CompileReport, depth: usize, out: &mut String) {
            let mark = if node.bound_ok { "ok " } else { "VIOLATION" };
            let _ = writeln!(
                out,
                "{}[{}] N={} states={} bound={} :: {}",
                "  ".repeat(depth),
                mark,
                node.n_connectives,
                node.states,
                node.bound,
                node.fragment,
            );
            for c in &node.children {
                go(c, depth + 1, out);
            }
        }
        let mut out = String::new();
        go(self, 0, &mut out);
        out
    }
}

/// The result of compiling a formula: a deterministic automaton over one
/// track per free variable, the variable-to-track order, and the audit
/// report.
#[derive(Debug, Clone)]
pub struct CompiledFormula {
    pub automaton: MultiTrackAutomaton,
    pub var_order: Vec<String>,
    pub report: CompileReport,
}

impl CompiledFormula {
    /// Membership of a tuple, given in `var_order`.
    pub fn accepts_tuple(&self, values: &[u64]) -> bool {
        assert_eq!(values.len(), self.var_order.len(), "tuple arity mismatch");
        let word = zip_pad(values, self.automaton.base());
        self.automaton.accepts(&word).expect("word matches the automaton shape")
    }

    /// For a sentence (arity 0): truth in the standard model. By padding
    /// closure this is equivalent to accepting the empty word.
    pub fn is_true_sentence(&self) -> bool {
        assert!(self.var_order.is_empty(), "not a sentence");
        !self.automaton.is_empty()
    }
}

/// Compiles a flat formula over base p. In `audit_mode` minimization is
/// disabled and every node's state count is audited; otherwise the
/// automaton is minimized after every step.
pub fn compile(phi: &FlatFormula, base: u32, audit_mode: bool) -> CompiledFormula {
    let (automaton, var_order, report) = rec(phi, base, audit_mode);
    debug_assert_eq!(var_order, phi.free_vars());
    CompiledFormula { automaton, var_order, report }
}

/// Flattens and compiles an arbitrary formula.
pub fn compile_formula(phi: &Formula, base: u32, audit_mode: bool) -> CompiledFormula {
    compile(&flatten(phi), base, audit_mode)
}

/// Compiles a sentence to an arity-0 automaton; its language is nonempty
/// exactly when the sentence is true.
pub fn compile_sentence(phi: &Formula, base: u32) -> Result<CompiledFormula, CompileError> {
    let free = phi.free_vars();
    if !free.is_empty() {
        return Err(CompileError::OpenFormula(free));
    }
    Ok(compile_formula(phi, base, false))
}

const FRAGMENT_LIMIT: usize = 72;

fn fragment_of(phi: &FlatFormula) -> String {
    let mut text = phi.to_string();
    if text.len() > FRAGMENT_LIMIT {
        text.truncate(FRAGMENT_LIMIT);
        text.push_str("...");
    }
    text
}

fn finish(
    phi: &FlatFormula,
    automaton: MultiTrackAutomaton,
    audit_mode: bool,
    children: Vec<CompileReport>,
) -> (MultiTrackAutomaton, CompileReport) {
    let automaton = if audit_mode {
        automaton
    } else {
        automaton.minimize().expect("compiler automata are deterministic")
    };
    let n = phi.n_connectives();
    let bound = iterated_exp2(n, 3);
    let states = automaton.state_count();
    let report = CompileReport {
        fragment: fragment_of(phi),
        n_connectives: n,
        states,
        bound_ok: TowerInt::exact(states as u64) <= bound,
        bound,
        children,
    };
    (automaton, report)
}

fn rec(
    phi: &FlatFormula,
    base: u32,
    audit: bool,
) -> (MultiTrackAutomaton, Vec<String>, CompileReport) {
    match phi {
        FlatFormula::Atom(atom) => {
            let (automaton, report) = finish(phi, compile_atom(atom, base), audit, Vec::new());
            (automaton, atom_vars_sorted(atom), report)
        }
        FlatFormula::Not(inner) => {
            let (m, vars, child) = rec(inner, base, audit);
            let complemented = m.complement().expect("compiler automata are deterministic");
            let (automaton, report) = finish(phi, complemented, audit, vec![child]);
            (automaton, vars, report)
        }
        FlatFormula::And(a, b) => {
            let (ma, va, ra) = rec(a, base, audit);
            let (mb, vb, rb) = rec(b, base, audit);
            let (union, ca, cb) = align(&ma, &va, &mb, &vb);
            let product = ca.intersect(&cb).expect("aligned automata share shape");
            let (automaton, report) = finish(phi, product, audit, vec![ra, rb]);
            (automaton, union, report)
        }
        FlatFormula::Or(a, b) => {
            // a | b as !(!a & !b), keeping the product accounting.
            let (ma, va, ra) = rec(a, base, audit);
            let (mb, vb, rb) = rec(b, base, audit);
            let (union, ca, cb) = align(&ma, &va, &mb, &vb);
            let product = ca
                .complement()
                .and_then(|x| x.intersect(&cb.complement()?))
                .and_then(|x| x.complement())
                .expect("aligned automata share shape");
            let (automaton, report) = finish(phi, product, audit, vec![ra, rb]);
            (automaton, union, report)
        }
        FlatFormula::Imp(a, b) => {
            // a -> b as !(a & !b).
            let (ma, va, ra) = rec(a, base, audit);
            let (mb, vb, rb) = rec(b, base, audit);
            let (union, ca, cb) = align(&ma, &va, &mb, &vb);
            let product = cb
                .complement()
                .and_then(|nb| ca.intersect(&nb))
                .and_then(|x| x.complement())
                .expect("aligned automata share shape");
            let (automaton, report) = finish(phi, product, audit, vec![ra, rb]);
            (automaton, union, report)
        }
        FlatFormula::Exists(x, inner) => {
            let (m, vars, child) = rec(inner, base, audit);
            let (m, vars) = project_out(m, vars, x);
            let (automaton, report) = finish(phi, m, audit, vec![child]);
            (automaton, vars, report)
        }
        FlatFormula::Forall(x, inner) => {
            // A x. psi as !(E x. !psi).
            let (m, vars, child) = rec(inner, base, audit);
            let negated = m.complement().expect("compiler automata are deterministic");
            let (projected, vars) = project_out(negated, vars, x);
            let automaton = projected.complement().expect("projection output is determinized");
            let (automaton, report) = finish(phi, automaton, audit, vec![child]);
            (automaton, vars, report)
        }
    }
}

fn atom_vars_sorted(atom: &FlatAtom) -> Vec<String> {
    let mut vars: Vec<String> = atom.vars().into_iter().map(str::to_string).collect();
    vars.sort();
    vars
}

fn compile_atom(atom: &FlatAtom, base: u32) -> MultiTrackAutomaton {
    let (machine, vars): (MultiTrackAutomaton, Vec<&str>) = match atom {
        FlatAtom::VarEq(x, y) => (eq_automaton(base), vec![x, y]),
        FlatAtom::SuccEq(x, y) => (succ_automaton(base), vec![x, y]),
        FlatAtom::AddEq(x, y, z) => (add_automaton(base), vec![x, y, z]),
        FlatAtom::VpEq(x, y) => (v_automaton(base), vec![x, y]),
    };
    let mut sorted = vars.clone();
    sorted.sort();
    let map: Vec<usize> = vars
        .iter()
        .map(|v| sorted.iter().position(|s| s == v).expect("present"))
        .collect();
    machine
        .cylindrify(&map, sorted.len())
        .expect("atom track map is a permutation")
}

/// Cylindrifies both sides onto the sorted union of their free variables.
fn align(
    ma: &MultiTrackAutomaton,
    va: &[String],
    mb: &MultiTrackAutomaton,
    vb: &[String],
) -> (Vec<String>, MultiTrackAutomaton, MultiTrackAutomaton) {
    let mut union: Vec<String> = va.iter().chain(vb.iter()).cloned().collect();
    union.sort();
    union.dedup();
    let map_into = |vars: &[String]| -> Vec<usize> {
        vars.iter()
            .map(|v| union.iter().position(|u| u == v).expect("member of the union"))
            .collect()
    };
    let ca = ma.cylindrify(&map_into(va), union.len()).expect("injective track map");
    let cb = mb.cylindrify(&map_into(vb), union.len()).expect("injective track map");
    (union, ca, cb)
}

/// E x: projects the track of x (if present), restores padding closure,
/// and determinizes. Vacuous quantification leaves the automaton alone.
fn project_out(
    m: MultiTrackAutomaton,
    vars: Vec<String>,
    x: &str,
) -> (MultiTrackAutomaton, Vec<String>) {
    let Some(track) = vars.iter().position(|v| v == x) else {
        return (m, vars);
    };
    let mut remaining = vars;
    remaining.remove(track);
    let projected = m
        .project(track)
        .expect("track index is in range")
        .zero_saturate()
        .determinize();
    (projected, remaining)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::digits;
    use crate::syntax::parse;

    fn compiled(text: &str, base: u32) -> CompiledFormula {
        compile_formula(&parse(text).unwrap(), base, false)
    }

    #[test]
    fn forced_zero() {
        // E y. (x + x = y & y = x) holds only at x = 0.
        let c = compiled("E y. (x + x = y & y = x)", 2);
        assert_eq!(c.var_order, vec!["x"]);
        for n in 0..=50 {
            assert_eq!(c.accepts_tuple(&[n]), n == 0, "n={n}");
        }
    }

    #[test]
    fn v_fixpoints_up_to_eight() {
        // Solutions of V(x) = x up to 8, against the direct scan.
        let c = compiled("V(x) = x", 2);
        let direct: Vec<u64> =
            (0..=8).filter(|&n| crate::encoding::v_p(n, 2) == n).collect();
        let got: Vec<u64> = (0..=8).filter(|&n| c.accepts_tuple(&[n])).collect();
        assert_eq!(got, direct);
        assert_eq!(got, vec![0, 1, 2, 4, 8]);
    }

    #[test]
    fn power_between_inner_formula() {
        // E y. (x < y & y < x + x & V(y) = y): enumeration says x=3 has
        // the witness 4, x=4 none in (4,8), and x=5 has the witness 8.
        let c = compiled("E y. (x < y & y < x + x & V(y) = y)", 2);
        let oracle = |x: u64| ((x + 1)..(2 * x)).any(|y| crate::encoding::v_p(y, 2) == y);
        for x in 0..=64 {
            assert_eq!(c.accepts_tuple(&[x]), oracle(x), "x={x}");
        }
        assert!(c.accepts_tuple(&[3]));
        assert!(!c.accepts_tuple(&[4]));
        assert!(c.accepts_tuple(&[5]));
    }

    #[test]
    fn sentences_compile_to_arity_zero() {
        let t = compile_sentence(&parse("A x. A y. x + y = y + x").unwrap(), 2).unwrap();
        assert_eq!(t.automaton.tracks(), 0);
        assert!(t.is_true_sentence());
        let f = compile_sentence(&parse("E x. S(x) = 0").unwrap(), 2).unwrap();
        assert!(!f.is_true_sentence());
        let w = compile_sentence(
            &parse("E x. (V(x) = x & !(x = 0) & !(x = 1))").unwrap(),
            2,
        )
        .unwrap();
        assert!(w.is_true_sentence());
    }

    #[test]
    fn open_formulas_are_rejected_as_sentences() {
        let e = compile_sentence(&parse("x = 0").unwrap(), 2).unwrap_err();
        let CompileError::OpenFormula(vars) = e;
        assert_eq!(vars, vec!["x"]);
    }

    #[test]
    fn audit_mode_bounds_hold_per_node() {
        for text in [
            "V(x) = x & !(x = 0)",
            "E y. (x < y & y < x + x & V(y) = y)",
            "A y. (x + y = y -> x = 0)",
            "x <= 5 | 10 <= x",
        ] {
            let c = compile_formula(&parse(text).unwrap(), 2, true);
            assert!(c.report.all_ok(), "bound violated for {text}:\n{}", c.report.to_text());
        }
    }

    #[test]
    fn audit_and_minimized_compilations_agree() {
        for text in ["E y. x = y + y", "V(x) = x", "x < 3"] {
            let audited = compile_formula(&parse(text).unwrap(), 3, true);
            let minimized = compile_formula(&parse(text).unwrap(), 3, false);
            assert!(audited.automaton.equivalent(&minimized.automaton).unwrap());
            assert!(minimized.automaton.state_count() <= audited.automaton.state_count());
        }
    }

    #[test]
    fn quantifier_duality_on_compiled_languages() {
        // A y. psi and !(E y. !psi) compile to equivalent automata.
        let psi = parse("x + y = y -> x = 0").unwrap();
        let forall = Formula::forall("y", psi.clone());
        let dual = Formula::not(Formula::exists("y", Formula::not(psi)));
        let a = compile_formula(&forall, 2, false);
        let b = compile_formula(&dual, 2, false);
        assert!(a.automaton.equivalent(&b.automaton).unwrap());
    }

    #[test]
    fn vacuous_quantification_is_identity() {
        let inner = compile_formula(&parse("x = 0").unwrap(), 2, false);
        let quantified = compile_formula(&parse("E q. x = 0").unwrap(), 2, false);
        assert!(inner.automaton.equivalent(&quantified.automaton).unwrap());
        assert_eq!(quantified.var_order, vec!["x"]);
    }

    #[test]
    fn report_tree_serializes() {
        let c = compile_formula(&parse("E y. x = y + y").unwrap(), 2, true);
        let text = c.report.to_text();
        assert!(text.contains("N="));
        assert!(text.contains("states="));
        assert!(text.contains("bound="));
        assert!(text.lines().count() >= 3);
    }

    #[test]
    fn compiled_automata_are_padding_closed() {
        let c = compiled("E y. (x = y + y & V(y) = y)", 2);
        for n in 0..=200u64 {
            let w = digits(n, 2);
            assert_eq!(
                c.automaton.accepts(&w).unwrap(),
                c.automaton.accepts(&w.pad(1)).unwrap(),
                "n={n}"
            );
        }
    }
}
