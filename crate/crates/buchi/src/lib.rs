//! Decision procedure for base-p Büchi arithmetic: the first-order theory
//! of (ℕ, S, +, 0, V_p), where V_p(n) is the largest power of p dividing n.
//!
//! Sentences are decided by compiling formulas to deterministic
//! multi-track automata over base-p digit tuples (least significant digit
//! first). On top of the compiler the crate extracts minimal witnesses,
//! enumerates solutions, materializes the axiomatization of the theory,
//! and audits the quantitative bounds behind its witness-bound axiom
//! scheme: compiled automata stay within an iterated-exponential state
//! bound, and satisfiable one-variable formulas have witnesses below
//! p^states.
//!
//! Start with [`syntax::parse`] and [`decision::decide`], or run the
//! examples; the `buchi` binary exposes the same operations for scripts.

pub mod automata;
pub mod axioms;
pub mod base_automata;
pub mod bounds;
pub mod compiler;
pub mod corpus;
pub mod decision;
pub mod encoding;
pub mod syntax;
