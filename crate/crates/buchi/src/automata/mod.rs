//! Multi-track finite automata over base-p digit tuples, with the closure
//! operations the formula compiler is built from: complement, product
//! intersection, subset-construction determinization, cylindrification,
//! track projection and zero-saturation.
//!
//! Words are read least significant letter first. Deterministic automata
//! are always complete (a dead state absorbs missing transitions), and
//! every automaton the compiler produces is padding-closed: acceptance
//! depends only on the numbers a word encodes, not on trailing zero
//! letters.

mod text;

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::encoding::DigitWord;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("operation requires a deterministic automaton")]
    NotDeterministic,
    #[error("track count mismatch: {left} vs {right}")]
    TrackMismatch { left: usize, right: usize },
    #[error("base mismatch: {left} vs {right}")]
    BaseMismatch { left: u32, right: u32 },
    #[error("word over base {word_base} with {word_tracks} tracks fed to an automaton over base {base} with {tracks} tracks")]
    WordMismatch { word_base: u32, word_tracks: usize, base: u32, tracks: usize },
    #[error("invalid track map: {0}")]
    InvalidTrackMap(String),
    #[error("track index {index} out of range for {tracks} tracks")]
    TrackOutOfRange { index: usize, tracks: usize },
    #[error("automaton has no tracks to project")]
    NoTracks,
    #[error("operation requires a single-track automaton, got {0} tracks")]
    NotSingleTrack(usize),
    #[error("invalid automaton text: {0}")]
    InvalidText(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    /// Total transition function, `delta[state * letters + letter]`.
    Dfa { initial: u32, delta: Vec<u32> },
    /// Transition relation, per state a sorted list of (letter, target).
    Nfa { initials: Vec<u32>, delta: Vec<Vec<(u32, u32)>> },
}

/// A finite automaton over the alphabet of k-tuples of base-p digits.
/// For k = 0 the alphabet is the single empty tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiTrackAutomaton {
    base: u32,
    tracks: usize,
    accepting: Vec<bool>,
    kind: Kind,
}

impl MultiTrackAutomaton {
    /// A complete DFA from an explicit transition table.
    pub fn new_dfa(
        base: u32,
        tracks: usize,
        initial: usize,
        accepting: Vec<bool>,
        delta: Vec<usize>,
    ) -> Self {
        assert!(base >= 2, "base must be at least 2");
        let states = accepting.len();
        let letters = letter_count(base, tracks);
        assert!(states > 0, "automaton needs at least one state");
        assert!(initial < states, "initial state out of range");
        assert_eq!(delta.len(), states * letters, "transition table must be total");
        assert!(delta.iter().all(|&t| t < states), "transition target out of range");
        MultiTrackAutomaton {
            base,
            tracks,
            accepting,
            kind: Kind::Dfa {
                initial: initial as u32,
                delta: delta.into_iter().map(|t| t as u32).collect(),
            },
        }
    }

    /// A nondeterministic automaton from a transition relation.
    pub fn new_nfa(
        base: u32,
        tracks: usize,
        initials: Vec<usize>,
        accepting: Vec<bool>,
        transitions: Vec<(usize, usize, usize)>,
    ) -> Self {
        assert!(base >= 2, "base must be at least 2");
        let states = accepting.len();
        let letters = letter_count(base, tracks);
        assert!(states > 0, "automaton needs at least one state");
        assert!(initials.iter().all(|&s| s < states), "initial state out of range");
        let mut delta = vec![Vec::new(); states];
        for (from, letter, to) in transitions {
            assert!(from < states && to < states, "transition state out of range");
            assert!(letter < letters, "transition letter out of range");
            delta[from].push((letter as u32, to as u32));
        }
        for row in &mut delta {
            row.sort_unstable();
            row.dedup();
        }
        let mut initials: Vec<u32> = initials.into_iter().map(|s| s as u32).collect();
        initials.sort_unstable();
        initials.dedup();
        MultiTrackAutomaton { base, tracks, accepting, kind: Kind::Nfa { initials, delta } }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn tracks(&self) -> usize {
        self.tracks
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn is_deterministic(&self) -> bool {
        matches!(self.kind, Kind::Dfa { .. })
    }

    pub fn letter_count(&self) -> usize {
        letter_count(self.base, self.tracks)
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn initial_states(&self) -> Vec<usize> {
        match &self.kind {
            Kind::Dfa { initial, .. } => vec![*initial as usize],
            Kind::Nfa { initials, .. } => initials.iter().map(|&s| s as usize).collect(),
        }
    }

    fn pack(&self, digits: &[u32]) -> usize {
        debug_assert_eq!(digits.len(), self.tracks);
        let mut id = 0usize;
        for &d in digits {
            debug_assert!(d < self.base);
            id = id * self.base as usize + d as usize;
        }
        id
    }

    fn unpack(&self, mut id: usize) -> Vec<u32> {
        let mut digits = vec![0u32; self.tracks];
        for slot in digits.iter_mut().rev() {
            *slot = (id % self.base as usize) as u32;
            id /= self.base as usize;
        }
        digits
    }

    fn dfa_parts(&self) -> Result<(u32, &[u32]), AutomatonError> {
        match &self.kind {
            Kind::Dfa { initial, delta } => Ok((*initial, delta)),
            Kind::Nfa { .. } => Err(AutomatonError::NotDeterministic),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), AutomatonError> {
        if self.base != other.base {
            return Err(AutomatonError::BaseMismatch { left: self.base, right: other.base });
        }
        if self.tracks != other.tracks {
            return Err(AutomatonError::TrackMismatch { left: self.tracks, right: other.tracks });
        }
        Ok(())
    }

    /// Complement of a deterministic automaton: the accepting set is
    /// inverted. Completeness makes this a pure flip.
    pub fn complement(&self) -> Result<Self, AutomatonError> {
        let _ = self.dfa_parts()?;
        let mut out = self.clone();
        for a in &mut out.accepting {
            *a = !*a;
        }
        Ok(out)
    }

    /// Reachable product of two deterministic automata over the same
    /// alphabet; accepts the intersection. Product states that can no
    /// longer reach acceptance are merged into a single dead state, so
    /// the result never exceeds |Q0|·|Q1| states.
    pub fn intersect(&self, other: &Self) -> Result<Self, AutomatonError> {
        self.check_compatible(other)?;
        let (i0, d0) = self.dfa_parts()?;
        let (i1, d1) = other.dfa_parts()?;
        let letters = self.letter_count();
        let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
        let mut order: Vec<(u32, u32)> = Vec::new();
        let mut queue = VecDeque::new();
        ids.insert((i0, i1), 0);
        order.push((i0, i1));
        queue.push_back((i0, i1));
        let mut delta = Vec::new();
        let mut accepting = Vec::new();
        while let Some((q0, q1)) = queue.pop_front() {
            accepting.push(self.accepting[q0 as usize] && other.accepting[q1 as usize]);
            for a in 0..letters {
                let t = (
                    d0[q0 as usize * letters + a],
                    d1[q1 as usize * letters + a],
                );
                let next = ids.len() as u32;
                let id = *ids.entry(t).or_insert_with(|| {
                    order.push(t);
                    queue.push_back(t);
                    next
                });
                delta.push(id);
            }
        }
        let out = MultiTrackAutomaton {
            base: self.base,
            tracks: self.tracks,
            accepting,
            kind: Kind::Dfa { initial: 0, delta },
        };
        Ok(out.collapse_dead())
    }

    /// Subset construction, keeping only reachable subsets; the result is
    /// deterministic, complete and language-equivalent.
    pub fn determinize(&self) -> Self {
        let letters = self.letter_count();
        let start: Vec<u32> = match &self.kind {
            Kind::Dfa { initial, .. } => vec![*initial],
            Kind::Nfa { initials, .. } => initials.clone(),
        };
        let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut subsets: Vec<Vec<u32>> = Vec::new();
        let mut queue = VecDeque::new();
        ids.insert(start.clone(), 0);
        subsets.push(start.clone());
        queue.push_back(start);
        let mut delta = Vec::new();
        let mut accepting = Vec::new();
        while let Some(subset) = queue.pop_front() {
            accepting.push(subset.iter().any(|&s| self.accepting[s as usize]));
            for a in 0..letters {
                let mut target: Vec<u32> = match &self.kind {
                    Kind::Dfa { delta, .. } => {
                        subset.iter().map(|&s| delta[s as usize * letters + a]).collect()
                    }
                    Kind::Nfa { delta, .. } => subset
                        .iter()
                        .flat_map(|&s| {
                            let row = &delta[s as usize];
                            let lo = row.partition_point(|&(l, _)| (l as usize) < a);
                            row[lo..]
                                .iter()
                                .take_while(move |&&(l, _)| l as usize == a)
                                .map(|&(_, t)| t)
                        })
                        .collect(),
                };
                target.sort_unstable();
                target.dedup();
                let next = ids.len() as u32;
                let id = *ids.entry(target.clone()).or_insert_with(|| {
                    subsets.push(target.clone());
                    queue.push_back(target);
                    next
                });
                delta.push(id);
            }
        }
        let out = MultiTrackAutomaton {
            base: self.base,
            tracks: self.tracks,
            accepting,
            kind: Kind::Dfa { initial: 0, delta },
        };
        out.collapse_dead()
    }

    /// Extends the automaton to a larger track list it ignores outside
    /// the image of `track_map`. `track_map[i]` gives the new position of
    /// the current track i; the map must be injective into
    /// `0..new_tracks`.
    pub fn cylindrify(
        &self,
        track_map: &[usize],
        new_tracks: usize,
    ) -> Result<Self, AutomatonError> {
        if track_map.len() != self.tracks {
            return Err(AutomatonError::InvalidTrackMap(format!(
                "map has {} entries for {} tracks",
                track_map.len(),
                self.tracks
            )));
        }
        let mut seen = vec![false; new_tracks];
        for &t in track_map {
            if t >= new_tracks {
                return Err(AutomatonError::InvalidTrackMap(format!(
                    "target track {t} out of range for {new_tracks} tracks"
                )));
            }
            if seen[t] {
                return Err(AutomatonError::InvalidTrackMap(format!(
                    "target track {t} used twice"
                )));
            }
            seen[t] = true;
        }
        let new_letters = letter_count(self.base, new_tracks);
        let states = self.state_count();
        // Restriction of a wide letter to the mapped tracks.
        let restrict = |wide: usize| -> usize {
            let mut digits_wide = vec![0u32; new_tracks];
            let mut id = wide;
            for slot in digits_wide.iter_mut().rev() {
                *slot = (id % self.base as usize) as u32;
                id /= self.base as usize;
            }
            let mut narrow = 0usize;
            for &pos in track_map {
                narrow = narrow * self.base as usize + digits_wide[pos] as usize;
            }
            narrow
        };
        let kind = match &self.kind {
            Kind::Dfa { initial, delta } => {
                let letters = self.letter_count();
                let mut new_delta = Vec::with_capacity(states * new_letters);
                for s in 0..states {
                    for a in 0..new_letters {
                        new_delta.push(delta[s * letters + restrict(a)]);
                    }
                }
                Kind::Dfa { initial: *initial, delta: new_delta }
            }
            Kind::Nfa { initials, delta } => {
                let mut new_delta = vec![Vec::new(); states];
                for (s, row) in delta.iter().enumerate() {
                    for a in 0..new_letters {
                        let narrow = restrict(a) as u32;
                        let lo = row.partition_point(|&(l, _)| l < narrow);
                        for &(l, t) in row[lo..].iter().take_while(|&&(l, _)| l == narrow) {
                            debug_assert_eq!(l, narrow);
                            new_delta[s].push((a as u32, t));
                        }
                    }
                    new_delta[s].sort_unstable();
                }
                Kind::Nfa { initials: clone_vec(initials), delta: new_delta }
            }
        };
        Ok(MultiTrackAutomaton {
            base: self.base,
            tracks: new_tracks,
            accepting: self.accepting.clone(),
            kind,
        })
    }

    /// Erases one track from every transition; the result is
    /// nondeterministic and accepts a word iff some digit sequence for
    /// the erased track completes it into an accepted word.
    pub fn project(&self, track: usize) -> Result<Self, AutomatonError> {
        if self.tracks == 0 {
            return Err(AutomatonError::NoTracks);
        }
        if track >= self.tracks {
            return Err(AutomatonError::TrackOutOfRange { index: track, tracks: self.tracks });
        }
        let states = self.state_count();
        let letters = self.letter_count();
        let mut new_delta = vec![Vec::new(); states];
        let reduce = |a: usize| -> usize {
            let digits = self.unpack(a);
            let mut narrow = 0usize;
            for (i, &d) in digits.iter().enumerate() {
                if i != track {
                    narrow = narrow * self.base as usize + d as usize;
                }
            }
            narrow
        };
        match &self.kind {
            Kind::Dfa { delta, .. } => {
                for s in 0..states {
                    for a in 0..letters {
                        new_delta[s].push((reduce(a) as u32, delta[s * letters + a]));
                    }
                }
            }
            Kind::Nfa { delta, .. } => {
                for (s, row) in delta.iter().enumerate() {
                    for &(a, t) in row {
                        new_delta[s].push((reduce(a as usize) as u32, t));
                    }
                }
            }
        }
        for row in &mut new_delta {
            row.sort_unstable();
            row.dedup();
        }
        let initials = match &self.kind {
            Kind::Dfa { initial, .. } => vec![*initial],
            Kind::Nfa { initials, .. } => initials.clone(),
        };
        Ok(MultiTrackAutomaton {
            base: self.base,
            tracks: self.tracks - 1,
            accepting: self.accepting.clone(),
            kind: Kind::Nfa { initials, delta: new_delta },
        })
    }

    /// Extends the accepting set to every state from which an accepting
    /// state is reachable reading only all-zero letters, restoring
    /// padding closure after projection. Idempotent.
    pub fn zero_saturate(&self) -> Self {
        let states = self.state_count();
        // Reverse adjacency restricted to the all-zero letter (id 0).
        let mut rev = vec![Vec::new(); states];
        match &self.kind {
            Kind::Dfa { delta, .. } => {
                let letters = self.letter_count();
                for s in 0..states {
                    rev[delta[s * letters] as usize].push(s);
                }
            }
            Kind::Nfa { delta, .. } => {
                for (s, row) in delta.iter().enumerate() {
                    for &(l, t) in row.iter().take_while(|&&(l, _)| l == 0) {
                        debug_assert_eq!(l, 0);
                        rev[t as usize].push(s);
                    }
                }
            }
        }
        let mut accepting = self.accepting.clone();
        let mut queue: VecDeque<usize> =
            (0..states).filter(|&s| accepting[s]).collect();
        while let Some(s) = queue.pop_front() {
            for &p in &rev[s] {
                if !accepting[p] {
                    accepting[p] = true;
                    queue.push_back(p);
                }
            }
        }
        MultiTrackAutomaton {
            base: self.base,
            tracks: self.tracks,
            accepting,
            kind: self.kind.clone(),
        }
    }

    /// Merges all states whose residual language is empty into a single
    /// dead state. Language-preserving; never increases the state count.
    fn collapse_dead(&self) -> Self {
        let (initial, delta) = match self.dfa_parts() {
            Ok(parts) => parts,
            Err(_) => return self.clone(),
        };
        let states = self.state_count();
        let letters = self.letter_count();
        let mut rev = vec![Vec::new(); states];
        for s in 0..states {
            for a in 0..letters {
                rev[delta[s * letters + a] as usize].push(s);
            }
        }
        let mut alive = self.accepting.clone();
        let mut queue: VecDeque<usize> = (0..states).filter(|&s| alive[s]).collect();
        while let Some(s) = queue.pop_front() {
            for &p in &rev[s] {
                if !alive[p] {
                    alive[p] = true;
                    queue.push_back(p);
                }
            }
        }
        if alive.iter().all(|&a| a) {
            return self.clone();
        }
        let live: Vec<usize> = (0..states).filter(|&s| alive[s]).collect();
        let dead_id = live.len() as u32;
        let mut map = vec![dead_id; states];
        for (new, &old) in live.iter().enumerate() {
            map[old] = new as u32;
        }
        let new_states = live.len() + 1;
        let mut new_delta = vec![dead_id; new_states * letters];
        let mut accepting = vec![false; new_states];
        for (new, &old) in live.iter().enumerate() {
            accepting[new] = self.accepting[old];
            for a in 0..letters {
                new_delta[new * letters + a] = map[delta[old * letters + a] as usize];
            }
        }
        // The dead state loops on every letter; rows were prefilled.
        MultiTrackAutomaton {
            base: self.base,
            tracks: self.tracks,
            accepting,
            kind: Kind::Dfa { initial: map[initial as usize], delta: new_delta },
        }
    }

    /// Minimal complete DFA for the language: unreachable states dropped,
    /// then indistinguishable states merged, then states renumbered in
    /// breadth-first discovery order so equal languages give structurally
    /// equal automata.
    pub fn minimize(&self) -> Result<Self, AutomatonError> {
        let (initial, delta) = self.dfa_parts()?;
        let states = self.state_count();
        let letters = self.letter_count();
        // Forward-reachable states only.
        let mut reach = vec![false; states];
        let mut queue = VecDeque::from([initial as usize]);
        reach[initial as usize] = true;
        while let Some(s) = queue.pop_front() {
            for a in 0..letters {
                let t = delta[s * letters + a] as usize;
                if !reach[t] {
                    reach[t] = true;
                    queue.push_back(t);
                }
            }
        }
        let kept: Vec<usize> = (0..states).filter(|&s| reach[s]).collect();
        let mut idx = vec![usize::MAX; states];
        for (new, &old) in kept.iter().enumerate() {
            idx[old] = new;
        }
        // Moore partition refinement on the reachable part.
        let n = kept.len();
        let mut class: Vec<usize> = kept.iter().map(|&s| usize::from(self.accepting[s])).collect();
        loop {
            let mut sig_ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut next = vec![0usize; n];
            for i in 0..n {
                let old = kept[i];
                let sig: Vec<usize> = (0..letters)
                    .map(|a| class[idx[delta[old * letters + a] as usize]])
                    .collect();
                let fresh = sig_ids.len();
                next[i] = *sig_ids.entry((class[i], sig)).or_insert(fresh);
            }
            let stable = next == class;
            class = next;
            if stable {
                break;
            }
        }
        let class_count = class.iter().max().map_or(0, |m| m + 1);
        // Representative transition table between classes.
        let mut class_delta = vec![0usize; class_count * letters];
        let mut class_accepting = vec![false; class_count];
        let mut seen = vec![false; class_count];
        for i in 0..n {
            let c = class[i];
            if seen[c] {
                continue;
            }
            seen[c] = true;
            class_accepting[c] = self.accepting[kept[i]];
            for a in 0..letters {
                class_delta[c * letters + a] = class[idx[delta[kept[i] * letters + a] as usize]];
            }
        }
        // Canonical breadth-first renumbering.
        let start = class[idx[initial as usize]];
        let mut order = vec![usize::MAX; class_count];
        let mut bfs = VecDeque::from([start]);
        order[start] = 0;
        let mut count = 1usize;
        while let Some(c) = bfs.pop_front() {
            for a in 0..letters {
                let t = class_delta[c * letters + a];
                if order[t] == usize::MAX {
                    order[t] = count;
                    count += 1;
                    bfs.push_back(t);
                }
            }
        }
        debug_assert_eq!(count, class_count);
        let mut final_delta = vec![0u32; class_count * letters];
        let mut final_accepting = vec![false; class_count];
        for c in 0..class_count {
            final_accepting[order[c]] = class_accepting[c];
            for a in 0..letters {
                final_delta[order[c] * letters + a] = order[class_delta[c * letters + a]] as u32;
            }
        }
        Ok(MultiTrackAutomaton {
            base: self.base,
            tracks: self.tracks,
            accepting: final_accepting,
            kind: Kind::Dfa { initial: 0, delta: final_delta },
        })
    }

    /// Whether the automaton accepts the word.
    pub fn accepts(&self, word: &DigitWord) -> Result<bool, AutomatonError> {
        if word.base() != self.base || word.tracks() != self.tracks {
            return Err(AutomatonError::WordMismatch {
                word_base: word.base(),
                word_tracks: word.tracks(),
                base: self.base,
                tracks: self.tracks,
            });
        }
        match &self.kind {
            Kind::Dfa { initial, delta } => {
                let letters = self.letter_count();
                let mut s = *initial as usize;
                for letter in word.letters() {
                    s = delta[s * letters + self.pack(letter)] as usize;
                }
                Ok(self.accepting[s])
            }
            Kind::Nfa { initials, delta } => {
                let mut set: Vec<u32> = initials.clone();
                for letter in word.letters() {
                    let a = self.pack(letter) as u32;
                    let mut next: Vec<u32> = set
                        .iter()
                        .flat_map(|&s| {
                            let row = &delta[s as usize];
                            let lo = row.partition_point(|&(l, _)| l < a);
                            row[lo..].iter().take_while(move |&&(l, _)| l == a).map(|&(_, t)| t)
                        })
                        .collect();
                    next.sort_unstable();
                    next.dedup();
                    set = next;
                }
                Ok(set.iter().any(|&s| self.accepting[s as usize]))
            }
        }
    }

    /// Whether the language is empty, by reachability.
    pub fn is_empty(&self) -> bool {
        let states = self.state_count();
        let mut seen = vec![false; states];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for s in self.initial_states() {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(s) = queue.pop_front() {
            if self.accepting[s] {
                return false;
            }
            match &self.kind {
                Kind::Dfa { delta, .. } => {
                    let letters = self.letter_count();
                    for a in 0..letters {
                        let t = delta[s * letters + a] as usize;
                        if !seen[t] {
                            seen[t] = true;
                            queue.push_back(t);
                        }
                    }
                }
                Kind::Nfa { delta, .. } => {
                    for &(_, t) in &delta[s] {
                        if !seen[t as usize] {
                            seen[t as usize] = true;
                            queue.push_back(t as usize);
                        }
                    }
                }
            }
        }
        true
    }

    /// A shortest accepted word; among those, the one with the
    /// lexicographically least letter sequence. `None` when the language
    /// is empty. By the pigeonhole argument its length never exceeds the
    /// state count.
    pub fn shortest_accepted(&self) -> Option<DigitWord> {
        if !self.is_deterministic() {
            return self.determinize().shortest_accepted();
        }
        let (initial, delta) = self.dfa_parts().expect("deterministic");
        let letters = self.letter_count();
        let states = self.state_count();
        let mut back: Vec<Option<(u32, u32)>> = vec![None; states];
        let mut seen = vec![false; states];
        let start = initial as usize;
        if self.accepting[start] {
            return Some(DigitWord::empty(self.base, self.tracks));
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            for a in 0..letters {
                let t = delta[s * letters + a] as usize;
                if seen[t] {
                    continue;
                }
                seen[t] = true;
                back[t] = Some((s as u32, a as u32));
                if self.accepting[t] {
                    let mut rev = Vec::new();
                    let mut cur = t;
                    while let Some((p, l)) = back[cur] {
                        rev.push(self.unpack(l as usize));
                        cur = p as usize;
                    }
                    rev.reverse();
                    return Some(DigitWord::new(self.base, self.tracks, rev));
                }
                queue.push_back(t);
            }
        }
        None
    }

    /// For a single-track automaton, the accepted word encoding the least
    /// number. Minimal length first (number length is monotone in the
    /// value), then digits chosen greedily from the most significant
    /// position down.
    pub fn least_value_word(&self) -> Result<Option<DigitWord>, AutomatonError> {
        if self.tracks != 1 {
            return Err(AutomatonError::NotSingleTrack(self.tracks));
        }
        if !self.is_deterministic() {
            return self.determinize().least_value_word();
        }
        let Some(shortest) = self.shortest_accepted() else {
            return Ok(None);
        };
        let len = shortest.len();
        if len == 0 {
            return Ok(Some(shortest));
        }
        let (initial, delta) = self.dfa_parts().expect("deterministic");
        let letters = self.letter_count();
        let states = self.state_count();
        // reach[i] = states reachable from the initial state in exactly i steps.
        let mut reach = Vec::with_capacity(len + 1);
        let mut cur = vec![false; states];
        cur[initial as usize] = true;
        reach.push(cur.clone());
        for _ in 0..len {
            let mut next = vec![false; states];
            for s in 0..states {
                if cur[s] {
                    for a in 0..letters {
                        next[delta[s * letters + a] as usize] = true;
                    }
                }
            }
            reach.push(next.clone());
            cur = next;
        }
        // Fix digits from the most significant position downwards,
        // keeping the set of states from which the fixed suffix accepts.
        let mut suffix_ok = self.accepting.clone();
        let mut digits = vec![0u32; len];
        for pos in (0..len).rev() {
            let mut chosen = None;
            for d in 0..letters {
                let feasible = (0..states).any(|s| {
                    reach[pos][s] && suffix_ok[delta[s * letters + d] as usize]
                });
                if feasible {
                    chosen = Some(d);
                    break;
                }
            }
            let d = chosen.expect("a shortest accepted word of this length exists");
            digits[pos] = d as u32;
            let next: Vec<bool> = (0..states)
                .map(|s| suffix_ok[delta[s * letters + d] as usize])
                .collect();
            suffix_ok = next;
        }
        let letters_vec = digits.into_iter().map(|d| vec![d]).collect();
        Ok(Some(DigitWord::new(self.base, 1, letters_vec)))
    }

    /// All accepted words of length at most `max_len`, shortest first and
    /// lexicographically within a length. Exponential in `max_len`; meant
    /// for inspection and tests.
    pub fn enumerate(&self, max_len: usize) -> Vec<DigitWord> {
        if !self.is_deterministic() {
            return self.determinize().enumerate(max_len);
        }
        let (initial, delta) = self.dfa_parts().expect("deterministic");
        let letters = self.letter_count();
        let mut out = Vec::new();
        let mut level: Vec<(usize, Vec<Vec<u32>>)> = vec![(initial as usize, Vec::new())];
        if self.accepting[initial as usize] {
            out.push(DigitWord::empty(self.base, self.tracks));
        }
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (s, word) in &level {
                for a in 0..letters {
                    let t = delta[s * letters + a] as usize;
                    let mut w = word.clone();
                    w.push(self.unpack(a));
                    if self.accepting[t] {
                        out.push(DigitWord::new(self.base, self.tracks, w.clone()));
                    }
                    next.push((t, w));
                }
            }
            level = next;
        }
        out
    }

    /// Exact language equivalence via product emptiness; inputs are
    /// determinized as needed.
    pub fn equivalent(&self, other: &Self) -> Result<bool, AutomatonError> {
        self.check_compatible(other)?;
        let a = if self.is_deterministic() { self.clone() } else { self.determinize() };
        let b = if other.is_deterministic() { other.clone() } else { other.determinize() };
        Ok(a.intersect(&b.complement()?)?.is_empty()
            && b.intersect(&a.complement()?)?.is_empty())
    }

    pub(crate) fn transitions_for_text(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        match &self.kind {
            Kind::Dfa { delta, .. } => {
                let letters = self.letter_count();
                for s in 0..self.state_count() {
                    for a in 0..letters {
                        out.push((s, a, delta[s * letters + a] as usize));
                    }
                }
            }
            Kind::Nfa { delta, .. } => {
                for (s, row) in delta.iter().enumerate() {
                    for &(a, t) in row {
                        out.push((s, a as usize, t as usize));
                    }
                }
            }
        }
        out
    }

    pub(crate) fn unpack_letter(&self, id: usize) -> Vec<u32> {
        self.unpack(id)
    }

    /// States that cannot reach acceptance (used when eliding the dead
    /// part in DOT output).
    pub(crate) fn dead_states(&self) -> Vec<bool> {
        let states = self.state_count();
        let mut rev = vec![Vec::new(); states];
        for (s, _, t) in self.transitions_for_text() {
            rev[t].push(s);
        }
        let mut alive = self.accepting.clone();
        let mut queue: VecDeque<usize> = (0..states).filter(|&s| alive[s]).collect();
        while let Some(s) = queue.pop_front() {
            for &p in &rev[s] {
                if !alive[p] {
                    alive[p] = true;
                    queue.push_back(p);
                }
            }
        }
        alive.iter().map(|&a| !a).collect()
    }
}

fn clone_vec<T: Clone>(v: &[T]) -> Vec<T> {
    v.to_vec()
}

/// p^k as a usize, with an overflow guard.
pub fn letter_count(base: u32, tracks: usize) -> usize {
    let mut n: usize = 1;
    for _ in 0..tracks {
        n = n
            .checked_mul(base as usize)
            .expect("alphabet too large: base^tracks overflows");
    }
    n
}
