//! Deciding sentences, extracting and bounding witnesses, evaluating
//! closed terms, and the brute-force bounded evaluator the automaton
//! pipeline is cross-checked against.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::bounds::{iterated_exp2, scheme_bound, TowerInt};
use crate::compiler::{compile_formula, compile_sentence, CompileReport};
use crate::encoding::v_p;
use crate::syntax::{complexity, flatten, Formula, Term};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DecisionError {
    #[error("expected a sentence; free variables: {}", .0.join(", "))]
    OpenFormula(Vec<String>),
    #[error("expected exactly one free variable, found {}: {}", .0.len(), .0.join(", "))]
    ExpectedOneFreeVar(Vec<String>),
    #[error("expected between 1 and {max} free variables, found {found}")]
    UnsupportedArity { max: usize, found: usize },
    #[error("expected a quantifier-free sentence")]
    QuantifierPresent,
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("witness value does not fit in 64 bits")]
    WitnessOverflow,
}

/// Truth of a sentence in the standard model, by compiling it to an
/// arity-0 automaton and testing emptiness.
pub fn decide(phi: &Formula, base: u32) -> Result<bool, DecisionError> {
    let compiled = compile_sentence(phi, base)
        .map_err(|crate::compiler::CompileError::OpenFormula(vars)| {
            DecisionError::OpenFormula(vars)
        })?;
    Ok(compiled.is_true_sentence())
}

/// The least n satisfying a one-free-variable formula, or `None` when it
/// is unsatisfiable.
pub fn min_witness(phi: &Formula, base: u32) -> Result<Option<u64>, DecisionError> {
    let free = phi.free_vars();
    if free.len() != 1 {
        return Err(DecisionError::ExpectedOneFreeVar(free));
    }
    let compiled = compile_formula(phi, base, false);
    let Some(word) = compiled
        .automaton
        .least_value_word()
        .expect("one free variable gives one track")
    else {
        return Ok(None);
    };
    let mut value: u128 = 0;
    for letter in word.letters().iter().rev() {
        value = value * u128::from(base) + u128::from(letter[0]);
        if value > u128::from(u64::MAX) {
            return Err(DecisionError::WitnessOverflow);
        }
    }
    Ok(Some(value as u64))
}

/// All solutions with every coordinate at most `limit`, ascending
/// (lexicographically for tuples), coordinates in the compiled variable
/// order. Supports one to three free variables.
pub fn solutions(phi: &Formula, base: u32, limit: u64) -> Result<Vec<Vec<u64>>, DecisionError> {
    let free = phi.free_vars();
    if free.is_empty() || free.len() > 3 {
        return Err(DecisionError::UnsupportedArity { max: 3, found: free.len() });
    }
    let compiled = compile_formula(phi, base, false);
    let arity = free.len();
    let mut out = Vec::new();
    let mut tuple = vec![0u64; arity];
    loop {
        if compiled.accepts_tuple(&tuple) {
            out.push(tuple.clone());
        }
        // Advance the tuple in ascending lexicographic order.
        let mut pos = arity;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            if tuple[pos] < limit {
                tuple[pos] += 1;
                for slot in tuple.iter_mut().skip(pos + 1) {
                    *slot = 0;
                }
                break;
            }
        }
    }
}

/// The audit record grounding the witness-bound axiom scheme for one
/// formula: witness < p^states and states within the iterated-exponent
/// tower of the formula length.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub formula: Formula,
    pub base: u32,
    pub states: usize,
    pub min_witness: Option<u64>,
    /// p^states, the value cap a shortest accepted word implies.
    pub p_to_states: TowerInt,
    /// The scheme bound p^(2_length^3).
    pub scheme_bound: TowerInt,
    /// Formula length (desugared node count).
    pub length: u64,
    /// Connective/quantifier count of the flattened formula.
    pub flat_connectives: u64,
    /// The side-claim that flattening stays within the formula length.
    pub flat_within_length: bool,
    pub witness_within_cap: bool,
    pub states_within_tower: bool,
    /// Every per-node audit in the compilation passed.
    pub node_bounds_ok: bool,
    pub report: CompileReport,
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "formula: {}", self.formula)?;
        writeln!(f, "base: {}", self.base)?;
        writeln!(f, "states: {}", self.states)?;
        match self.min_witness {
            Some(w) => writeln!(f, "min-witness: {w}")?,
            None => writeln!(f, "min-witness: none")?,
        }
        writeln!(f, "p^states: {}", self.p_to_states)?;
        writeln!(f, "scheme-bound: {}", self.scheme_bound)?;
        writeln!(f, "length: {}", self.length)?;
        writeln!(f, "flat-connectives: {}", self.flat_connectives)?;
        writeln!(f, "flat-within-length: {}", self.flat_within_length)?;
        writeln!(f, "witness-within-cap: {}", self.witness_within_cap)?;
        writeln!(f, "states-within-tower: {}", self.states_within_tower)?;
        writeln!(f, "node-bounds-ok: {}", self.node_bounds_ok)?;
        write!(f, "{}", self.report.to_text())
    }
}

/// Compiles a one-free-variable formula in audit mode and checks the
/// witness-bound chain: witness < p^states <= p^(2_length^3).
pub fn verify_bound(phi: &Formula, base: u32) -> Result<BoundReport, DecisionError> {
    let free = phi.free_vars();
    if free.len() != 1 {
        return Err(DecisionError::ExpectedOneFreeVar(free));
    }
    let compiled = compile_formula(phi, base, true);
    let witness = min_witness(phi, base)?;
    let states = compiled.automaton.state_count();
    let p_to_states = TowerInt::pow(u64::from(base), TowerInt::exact(states as u64));
    let measures = complexity(phi);
    let flat_connectives = flatten(phi).n_connectives();
    let witness_within_cap = match witness {
        Some(w) => TowerInt::exact(w) < p_to_states,
        None => true,
    };
    let states_within_tower =
        TowerInt::exact(states as u64) <= iterated_exp2(measures.length, 3);
    Ok(BoundReport {
        formula: phi.clone(),
        base,
        states,
        min_witness: witness,
        p_to_states,
        scheme_bound: scheme_bound(u64::from(base), measures.length),
        length: measures.length,
        flat_connectives,
        flat_within_length: flat_connectives <= measures.length,
        witness_within_cap,
        states_within_tower,
        node_bounds_ok: compiled.report.all_ok(),
        report: compiled.report,
    })
}

fn eval_term(term: &Term, env: &[(String, u64)], base: u32) -> Result<u64, DecisionError> {
    match term {
        Term::Zero => Ok(0),
        Term::Var(x) => env
            .iter()
            .rev()
            .find(|(name, _)| name == x)
            .map(|&(_, v)| v)
            .ok_or_else(|| DecisionError::UnboundVariable(x.clone())),
        Term::Succ(t) => Ok(eval_term(t, env, base)? + 1),
        Term::Add(t, s) => Ok(eval_term(t, env, base)? + eval_term(s, env, base)?),
        Term::Vp(t) => Ok(v_p(eval_term(t, env, base)?, base)),
    }
}

/// The standard-model value of a closed term.
pub fn eval_closed_term(term: &Term, base: u32) -> Result<u64, DecisionError> {
    eval_term(term, &[], base)
}

/// Truth of a quantifier-free sentence by closed-term evaluation and
/// boolean recursion.
pub fn decide_qf_sentence(phi: &Formula, base: u32) -> Result<bool, DecisionError> {
    if phi.has_quantifier() {
        return Err(DecisionError::QuantifierPresent);
    }
    let free = phi.free_vars();
    if !free.is_empty() {
        return Err(DecisionError::OpenFormula(free));
    }
    bounded_eval(phi, &HashMap::new(), 0, base)
}

/// Brute-force evaluation with every quantifier ranging over [0, bound].
/// Sound for the standard model only when all deciding witnesses and
/// counterexamples in the evaluation tree lie at or below the bound;
/// corpus formulas document a safe bound.
pub fn bounded_eval(
    phi: &Formula,
    env: &HashMap<String, u64>,
    bound: u64,
    base: u32,
) -> Result<bool, DecisionError> {
    let mut stack: Vec<(String, u64)> =
        env.iter().map(|(k, &v)| (k.clone(), v)).collect();
    stack.sort();
    eval(phi, &mut stack, bound, base)
}

fn eval(
    phi: &Formula,
    env: &mut Vec<(String, u64)>,
    bound: u64,
    base: u32,
) -> Result<bool, DecisionError> {
    match phi {
        Formula::Eq(t, s) => Ok(eval_term(t, env, base)? == eval_term(s, env, base)?),
        Formula::Not(g) => Ok(!eval(g, env, bound, base)?),
        Formula::And(a, b) => Ok(eval(a, env, bound, base)? && eval(b, env, bound, base)?),
        Formula::Or(a, b) => Ok(eval(a, env, bound, base)? || eval(b, env, bound, base)?),
        Formula::Imp(a, b) => Ok(!eval(a, env, bound, base)? || eval(b, env, bound, base)?),
        Formula::Iff(a, b) => Ok(eval(a, env, bound, base)? == eval(b, env, bound, base)?),
        Formula::Exists(x, g) => {
            env.push((x.clone(), 0));
            let mut found = false;
            for v in 0..=bound {
                env.last_mut().expect("just pushed").1 = v;
                if eval(g, env, bound, base)? {
                    found = true;
                    break;
                }
            }
            env.pop();
            Ok(found)
        }
        Formula::Forall(x, g) => {
            env.push((x.clone(), 0));
            let mut holds = true;
            for v in 0..=bound {
                env.last_mut().expect("just pushed").1 = v;
                if !eval(g, env, bound, base)? {
                    holds = false;
                    break;
                }
            }
            env.pop();
            Ok(holds)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn env1(name: &str, v: u64) -> HashMap<String, u64> {
        HashMap::from([(name.to_string(), v)])
    }

    #[test]
    fn decide_examples() {
        // Every number is even or odd.
        assert!(decide(&parse("A x. E y. x = y + y | x = (y + y) + 1").unwrap(), 2).unwrap());
        // Zero is not a successor.
        assert!(!decide(&parse("E x. S(x) = 0").unwrap(), 2).unwrap());
    }

    #[test]
    fn power_gap_regression() {
        // No power of 2 lies strictly between 2^k and 2^(k+1).
        let phi = parse("A x. (V(x) = x -> !(E y. (x < y & y < x + x & V(y) = y)))").unwrap();
        assert!(decide(&phi, 2).unwrap());
    }

    #[test]
    fn decide_rejects_open_formulas() {
        let e = decide(&parse("x = 0").unwrap(), 2).unwrap_err();
        assert_eq!(e, DecisionError::OpenFormula(vec!["x".into()]));
    }

    #[test]
    fn min_witness_examples() {
        // Scanning V_2 over 0..2 shows 2 is the first nontrivial fixpoint.
        let phi = parse("V(x) = x & !(x = 0) & !(x = 1)").unwrap();
        assert_eq!(min_witness(&phi, 2).unwrap(), Some(2));
        assert_eq!(min_witness(&parse("!(x = x)").unwrap(), 2).unwrap(), None);
        assert_eq!(min_witness(&parse("x = 8").unwrap(), 2).unwrap(), Some(8));
        assert!(min_witness(&parse("0 = 0").unwrap(), 2).is_err());
    }

    #[test]
    fn solutions_examples() {
        let v_fix = parse("V(x) = x").unwrap();
        let got: Vec<u64> = solutions(&v_fix, 2, 8).unwrap().into_iter().map(|t| t[0]).collect();
        assert_eq!(got, vec![0, 1, 2, 4, 8]);
        let evens = parse("E y. x = y + y").unwrap();
        let got: Vec<u64> = solutions(&evens, 3, 10).unwrap().into_iter().map(|t| t[0]).collect();
        assert_eq!(got, vec![0, 2, 4, 6, 8, 10]);
        let small = parse("x < 3").unwrap();
        let got: Vec<u64> = solutions(&small, 2, 10).unwrap().into_iter().map(|t| t[0]).collect();
        assert_eq!(got, vec![0, 1, 2]);
    }

    #[test]
    fn solutions_on_tuples() {
        let phi = parse("x + y = 4").unwrap();
        let got = solutions(&phi, 2, 4).unwrap();
        assert_eq!(
            got,
            vec![vec![0, 4], vec![1, 3], vec![2, 2], vec![3, 1], vec![4, 0]]
        );
        assert!(solutions(&parse("0 = 0").unwrap(), 2, 4).is_err());
    }

    #[test]
    fn verify_bound_examples() {
        let r = verify_bound(&parse("x = 0").unwrap(), 2).unwrap();
        assert_eq!(r.min_witness, Some(0));
        assert!(r.witness_within_cap && r.states_within_tower && r.node_bounds_ok);

        let r = verify_bound(&parse("V(x) = x & !(x = 0) & !(x = 1)").unwrap(), 2).unwrap();
        assert_eq!(r.min_witness, Some(2));
        assert!(r.witness_within_cap);
        assert!(r.states_within_tower);

        let r = verify_bound(&parse("!(x = x)").unwrap(), 2).unwrap();
        assert_eq!(r.min_witness, None);
        assert!(r.witness_within_cap, "vacuously true without a witness");
    }

    #[test]
    fn closed_term_evaluation() {
        assert_eq!(eval_closed_term(&Term::numeral(2), 2).unwrap(), 2);
        // V(12) = 4 in base 2.
        let t = Term::vp(Term::numeral(12));
        assert_eq!(eval_closed_term(&t, 2).unwrap(), 4);
        let t = Term::add(Term::Zero, Term::Zero);
        assert_eq!(eval_closed_term(&t, 2).unwrap(), 0);
        assert_eq!(
            eval_closed_term(&Term::var("x"), 2).unwrap_err(),
            DecisionError::UnboundVariable("x".into())
        );
    }

    #[test]
    fn quantifier_free_sentences() {
        assert!(decide_qf_sentence(&parse("S(0) = 1").unwrap(), 2).unwrap());
        // V_2(4) = 4, not 2.
        assert!(!decide_qf_sentence(&parse("V(4) = 2").unwrap(), 2).unwrap());
        assert!(decide_qf_sentence(&parse("2 + 3 = 5 & !(1 = 0)").unwrap(), 2).unwrap());
        assert_eq!(
            decide_qf_sentence(&parse("E x. x = 0").unwrap(), 2).unwrap_err(),
            DecisionError::QuantifierPresent
        );
        assert_eq!(
            decide_qf_sentence(&parse("x = 0").unwrap(), 2).unwrap_err(),
            DecisionError::OpenFormula(vec!["x".into()])
        );
    }

    #[test]
    fn bounded_eval_is_bound_sensitive() {
        let phi = parse("E y. x = y + y").unwrap();
        assert!(bounded_eval(&phi, &env1("x", 6), 10, 2).unwrap());
        // The witness 3 is above the bound 2.
        assert!(!bounded_eval(&phi, &env1("x", 6), 2, 2).unwrap());
    }

    #[test]
    fn bounded_eval_power_gap_inner() {
        // No power of 2 strictly between 8 and 16.
        let phi = parse("E y. (x < y & y < x + x & V(y) = y)").unwrap();
        assert!(!bounded_eval(&phi, &env1("x", 8), 16, 2).unwrap());
        assert!(bounded_eval(&phi, &env1("x", 3), 16, 2).unwrap());
    }

    #[test]
    fn bounded_eval_reports_unbound_variables() {
        let phi = parse("x = y").unwrap();
        assert_eq!(
            bounded_eval(&phi, &env1("x", 1), 4, 2).unwrap_err(),
            DecisionError::UnboundVariable("y".into())
        );
    }

    #[test]
    fn qf_decision_matches_bounded_eval_at_zero() {
        for text in ["S(0) = 1", "V(4) = 2", "2 + 3 = 5 & !(1 = 0)", "0 = 0 -> 1 = 1"] {
            let phi = parse(text).unwrap();
            assert_eq!(
                decide_qf_sentence(&phi, 2).unwrap(),
                bounded_eval(&phi, &HashMap::new(), 0, 2).unwrap(),
                "{text}"
            );
        }
    }
}
