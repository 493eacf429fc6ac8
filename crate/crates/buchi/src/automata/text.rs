//! DOT export and a line-oriented text serialization for automata, both
//! byte-stable across runs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{letter_count, AutomatonError, MultiTrackAutomaton};

impl MultiTrackAutomaton {
    /// Graphviz DOT rendering: one node per state, accepting states as
    /// double circles, edge labels listing the digit tuples (or `*` when
    /// a pair of states is connected on every letter). With `elide_dead`
    /// the states that cannot reach acceptance are left out.
    pub fn to_dot(&self, elide_dead: bool) -> String {
        let dead = if elide_dead { self.dead_states() } else { vec![false; self.state_count()] };
        let mut grouped: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (from, letter, to) in self.transitions_for_text() {
            if dead[from] || dead[to] {
                continue;
            }
            grouped.entry((from, to)).or_default().push(letter);
        }
        let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n");
        for s in 0..self.state_count() {
            if dead[s] {
                continue;
            }
            if self.is_accepting(s) {
                let _ = writeln!(out, "  q{s} [shape=doublecircle];");
            } else {
                let _ = writeln!(out, "  q{s};");
            }
        }
        for (i, init) in self.initial_states().into_iter().enumerate() {
            if dead[init] {
                continue;
            }
            let _ = writeln!(out, "  start{i} [shape=point];");
            let _ = writeln!(out, "  start{i} -> q{init};");
        }
        let all = self.letter_count();
        for ((from, to), letters) in grouped {
            let label = if letters.len() == all {
                "*".to_string()
            } else {
                letters
                    .iter()
                    .map(|&a| render_letter(&self.unpack_letter(a)))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let _ = writeln!(out, "  q{from} -> q{to} [label=\"{label}\"];");
        }
        out.push_str("}\n");
        out
    }

    /// Structured text form: base, tracks, states, initial set, accepting
    /// set and the transition list. Parses back with [`from_text`].
    ///
    /// [`from_text`]: MultiTrackAutomaton::from_text
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "base {}", self.base());
        let _ = writeln!(out, "tracks {}", self.tracks());
        let _ = writeln!(out, "states {}", self.state_count());
        let _ = writeln!(out, "deterministic {}", self.is_deterministic());
        let initials = self
            .initial_states()
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(out, "initial {initials}");
        let accepting = (0..self.state_count())
            .filter(|&s| self.is_accepting(s))
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(out, "accepting {accepting}");
        let _ = writeln!(out, "transitions");
        for (from, letter, to) in self.transitions_for_text() {
            let _ = writeln!(out, "{from} {} {to}", render_letter(&self.unpack_letter(letter)));
        }
        out.push_str("end\n");
        out
    }

    /// Parses the text form produced by [`to_text`].
    ///
    /// [`to_text`]: MultiTrackAutomaton::to_text
    pub fn from_text(text: &str) -> Result<Self, AutomatonError> {
        let bad = |msg: &str| AutomatonError::InvalidText(msg.to_string());
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let mut field = |name: &str| -> Result<String, AutomatonError> {
            let line = lines.next().ok_or_else(|| bad(&format!("missing `{name}` line")))?;
            line.strip_prefix(name)
                .map(|rest| rest.trim().to_string())
                .ok_or_else(|| bad(&format!("expected `{name}`, got `{line}`")))
        };
        let base: u32 = field("base")?.parse().map_err(|_| bad("bad base"))?;
        if base < 2 {
            return Err(bad("base must be at least 2"));
        }
        let tracks: usize = field("tracks")?.parse().map_err(|_| bad("bad tracks"))?;
        let states: usize = field("states")?.parse().map_err(|_| bad("bad states"))?;
        let deterministic: bool =
            field("deterministic")?.parse().map_err(|_| bad("bad deterministic flag"))?;
        let initials: Vec<usize> = field("initial")?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("bad initial state")))
            .collect::<Result<_, _>>()?;
        let accepting_list: Vec<usize> = field("accepting")?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("bad accepting state")))
            .collect::<Result<_, _>>()?;
        let header = field("transitions")?;
        if !header.is_empty() {
            return Err(bad("unexpected tokens after `transitions`"));
        }
        let mut accepting = vec![false; states];
        for s in accepting_list {
            if s >= states {
                return Err(bad("accepting state out of range"));
            }
            accepting[s] = true;
        }
        let letters = letter_count(base, tracks);
        let mut triples = Vec::new();
        for line in lines {
            if line.trim() == "end" {
                let automaton = if deterministic {
                    if initials.len() != 1 {
                        return Err(bad("a deterministic automaton needs one initial state"));
                    }
                    let mut delta = vec![usize::MAX; states * letters];
                    for &(from, letter, to) in &triples {
                        if delta[from * letters + letter] != usize::MAX {
                            return Err(bad("duplicate transition in deterministic automaton"));
                        }
                        delta[from * letters + letter] = to;
                    }
                    if delta.iter().any(|&t| t == usize::MAX) {
                        return Err(bad("deterministic transition table is not total"));
                    }
                    MultiTrackAutomaton::new_dfa(base, tracks, initials[0], accepting, delta)
                } else {
                    MultiTrackAutomaton::new_nfa(base, tracks, initials, accepting, triples)
                };
                return Ok(automaton);
            }
            let mut parts = line.split_whitespace();
            let from: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| bad("bad transition source"))?;
            let letter_text = parts.next().ok_or_else(|| bad("missing transition letter"))?;
            let to: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| bad("bad transition target"))?;
            if parts.next().is_some() {
                return Err(bad("trailing tokens in transition"));
            }
            let letter = parse_letter(letter_text, base, tracks)
                .ok_or_else(|| bad(&format!("bad letter `{letter_text}`")))?;
            if from >= states || to >= states {
                return Err(bad("transition state out of range"));
            }
            triples.push((from, letter, to));
        }
        Err(bad("missing `end` line"))
    }
}

fn render_letter(digits: &[u32]) -> String {
    if digits.is_empty() {
        return "()".to_string();
    }
    let body = digits.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
    format!("({body})")
}

fn parse_letter(text: &str, base: u32, tracks: usize) -> Option<usize> {
    let inner = text.strip_prefix('(')?.strip_suffix(')')?;
    let digits: Vec<u32> = if inner.is_empty() {
        Vec::new()
    } else {
        inner.split(',').map(|d| d.parse().ok()).collect::<Option<_>>()?
    };
    if digits.len() != tracks || digits.iter().any(|&d| d >= base) {
        return None;
    }
    let mut id = 0usize;
    for &d in &digits {
        id = id * base as usize + d as usize;
    }
    Some(id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_automata::{eq_automaton, v_automaton};

    #[test]
    fn text_round_trips() {
        for m in [eq_automaton(2), v_automaton(3), eq_automaton(2).project(0).unwrap()] {
            let text = m.to_text();
            let back = MultiTrackAutomaton::from_text(&text).unwrap();
            assert_eq!(back, m);
            assert_eq!(back.to_text(), text);
        }
    }

    #[test]
    fn dot_shape() {
        let dot = eq_automaton(2).to_dot(false);
        assert!(dot.starts_with("digraph automaton {"));
        assert!(dot.contains("doublecircle"));
        assert!(dot.contains("q0 -> q0"));
        // The dead state loops on every letter.
        assert!(dot.contains("[label=\"*\"]"));
        let elided = eq_automaton(2).to_dot(true);
        assert!(elided.len() < dot.len());
    }

    #[test]
    fn from_text_rejects_malformed_input() {
        assert!(MultiTrackAutomaton::from_text("").is_err());
        let text = eq_automaton(2).to_text().replace("end\n", "");
        assert!(MultiTrackAutomaton::from_text(&text).is_err());
        let text = eq_automaton(2).to_text().replacen("0 (0,0) 0", "", 1);
        assert!(MultiTrackAutomaton::from_text(&text).is_err());
    }
}
