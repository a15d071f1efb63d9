//! The WDFA data model: a partial DFA stored as a compressed adjacency array
//! with outgoing edges sorted by symbol, plus the per-state incoming label.
//!
//! A [`Wdfa`] may be built from any edge list; structural assumptions
//! (determinism, input-consistency, reachability, co-reachability) are
//! reported by [`Wdfa::validate`] instead of being enforced at construction.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::alphabet::{Alphabet, Symbol};

pub(crate) const NONE: u32 = u32::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("an automaton needs at least one state")]
    NoStates,
    #[error("state {state} out of range (n = {n})")]
    StateOutOfRange { state: usize, n: usize },
    #[error("symbol code {0} is not in the alphabet")]
    SymbolOutOfAlphabet(u16),
    #[error("too many states or edges for 32-bit ids")]
    TooLarge,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("state {0} does not exist")]
    InvalidState(usize),
    #[error("symbol code {0} is not in the alphabet")]
    UnknownSymbol(u16),
    #[error("automata are over different alphabets")]
    AlphabetMismatch,
}

/// One broken structural assumption, with the offending state or edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NonDeterministic { state: usize, symbol: Symbol },
    InputInconsistent { state: usize, expected: Symbol, found: Symbol, from: usize },
    SourceHasIncoming { from: usize, symbol: Symbol },
    Unreachable { state: usize },
    NoFinalReachable { state: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // states are printed 1-based, like the text format
        match *self {
            Violation::NonDeterministic { state, symbol } => write!(
                f,
                "determinism: state {} has two edges labeled {}",
                state + 1,
                symbol.0
            ),
            Violation::InputInconsistent { state, expected, found, from } => write!(
                f,
                "input-consistency: state {} entered by symbol {} and by symbol {} (edge from {})",
                state + 1,
                expected.0,
                found.0,
                from + 1
            ),
            Violation::SourceHasIncoming { from, symbol } => write!(
                f,
                "source: incoming edge from {} labeled {}",
                from + 1,
                symbol.0
            ),
            Violation::Unreachable { state } => {
                write!(f, "reachability: state {} is not reachable from the source", state + 1)
            }
            Violation::NoFinalReachable { state } => {
                write!(f, "co-reachability: state {} reaches no final state", state + 1)
            }
        }
    }
}

/// A deterministic automaton with a partial transition function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wdfa {
    alphabet: Alphabet,
    source: u32,
    offsets: Vec<u32>,
    labels: Vec<Symbol>,
    targets: Vec<u32>,
    finals: Vec<bool>,
    in_labels: Vec<Symbol>,
}

impl Wdfa {
    /// Builds an automaton with `finals.len()` states from `(from, symbol, to)`
    /// triples. Edges of each state are sorted by symbol; duplicates are kept so
    /// that [`Wdfa::validate`] can report them.
    pub fn from_edges<I>(
        alphabet: Alphabet,
        finals: Vec<bool>,
        source: usize,
        edges: I,
    ) -> Result<Wdfa, BuildError>
    where
        I: IntoIterator<Item = (usize, Symbol, usize)>,
    {
        let n = finals.len();
        if n == 0 {
            return Err(BuildError::NoStates);
        }
        if n >= NONE as usize {
            return Err(BuildError::TooLarge);
        }
        if source >= n {
            return Err(BuildError::StateOutOfRange { state: source, n });
        }
        let mut raw: Vec<(u32, Symbol, u32)> = Vec::new();
        for (u, c, v) in edges {
            for s in [u, v] {
                if s >= n {
                    return Err(BuildError::StateOutOfRange { state: s, n });
                }
            }
            if !alphabet.contains(c) {
                return Err(BuildError::SymbolOutOfAlphabet(c.0));
            }
            raw.push((u as u32, c, v as u32));
        }
        if raw.len() >= NONE as usize {
            return Err(BuildError::TooLarge);
        }

        let mut offsets = vec![0u32; n + 1];
        for &(u, _, _) in &raw {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut pairs = vec![(Symbol::SOURCE, 0u32); raw.len()];
        for &(u, c, v) in &raw {
            let slot = &mut fill[u as usize];
            pairs[*slot as usize] = (c, v);
            *slot += 1;
        }
        drop(raw);
        for u in 0..n {
            pairs[offsets[u] as usize..offsets[u + 1] as usize].sort_unstable();
        }
        let (labels, targets) = pairs.into_iter().unzip();
        Ok(Wdfa::from_parts(alphabet, source as u32, offsets, labels, targets, finals))
    }

    /// Assembles an automaton from an adjacency array whose per-state slices
    /// are already sorted by symbol.
    pub(crate) fn from_parts(
        alphabet: Alphabet,
        source: u32,
        offsets: Vec<u32>,
        labels: Vec<Symbol>,
        targets: Vec<u32>,
        finals: Vec<bool>,
    ) -> Wdfa {
        let n = finals.len();
        debug_assert_eq!(offsets.len(), n + 1);
        debug_assert_eq!(labels.len(), targets.len());
        let mut in_labels = vec![Symbol::SOURCE; n];
        let mut seen = vec![false; n];
        for (&c, &v) in labels.iter().zip(&targets) {
            let v = v as usize;
            if v != source as usize && !seen[v] {
                seen[v] = true;
                in_labels[v] = c;
            }
        }
        Wdfa::from_raw(alphabet, source, offsets, labels, targets, finals, in_labels)
    }

    /// Assembles an automaton whose incoming labels are already known.
    pub(crate) fn from_raw(
        alphabet: Alphabet,
        source: u32,
        offsets: Vec<u32>,
        labels: Vec<Symbol>,
        targets: Vec<u32>,
        finals: Vec<bool>,
        in_labels: Vec<Symbol>,
    ) -> Wdfa {
        debug_assert_eq!(in_labels.len(), finals.len());
        Wdfa {
            alphabet,
            source,
            offsets,
            labels,
            targets,
            finals,
            in_labels,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.finals.len()
    }

    pub fn num_edges(&self) -> usize {
        self.labels.len()
    }

    /// `|Q| + |E|`.
    pub fn size(&self) -> usize {
        self.num_states() + self.num_edges()
    }

    pub fn source(&self) -> usize {
        self.source as usize
    }

    pub fn is_final(&self, u: usize) -> bool {
        self.finals[u]
    }

    pub fn finals(&self) -> &[bool] {
        &self.finals
    }

    pub fn num_finals(&self) -> usize {
        self.finals.iter().filter(|&&f| f).count()
    }

    /// λ(u): the label on the edges entering `u` (the first one seen, if the
    /// automaton is not input-consistent). [`Symbol::SOURCE`] for the source
    /// and for states without incoming edges.
    pub fn in_label(&self, u: usize) -> Symbol {
        self.in_labels[u]
    }

    pub fn in_labels(&self) -> &[Symbol] {
        &self.in_labels
    }

    /// Outgoing symbols of `u` in increasing order.
    ///
    /// # Panics
    /// If `u` is not a state.
    pub fn labels_from(&self, u: usize) -> &[Symbol] {
        &self.labels[self.offsets[u] as usize..self.offsets[u + 1] as usize]
    }

    /// Targets of `u`'s outgoing edges, aligned with [`Wdfa::labels_from`].
    ///
    /// # Panics
    /// If `u` is not a state.
    pub fn targets_from(&self, u: usize) -> &[u32] {
        &self.targets[self.offsets[u] as usize..self.offsets[u + 1] as usize]
    }

    /// `out(u)`, the set of symbols with a defined transition from `u`.
    pub fn out_labels(&self, u: usize) -> Result<&[Symbol], AutomatonError> {
        if u >= self.num_states() {
            return Err(AutomatonError::InvalidState(u));
        }
        Ok(self.labels_from(u))
    }

    pub fn out_degree(&self, u: usize) -> usize {
        (self.offsets[u + 1] - self.offsets[u]) as usize
    }

    /// δ(u, c).
    pub fn transition(&self, u: usize, c: Symbol) -> Option<usize> {
        let labels = self.labels_from(u);
        labels
            .binary_search(&c)
            .ok()
            .map(|i| self.targets_from(u)[i] as usize)
    }

    /// All edges `(from, symbol, to)`, grouped by source state and sorted by
    /// symbol within each state.
    pub fn edges(&self) -> impl Iterator<Item = (usize, Symbol, usize)> + '_ {
        (0..self.num_states()).flat_map(move |u| {
            self.labels_from(u)
                .iter()
                .zip(self.targets_from(u))
                .map(move |(&c, &v)| (u, c, v as usize))
        })
    }

    /// δ̂(q, word); `Ok(None)` when some step is undefined.
    pub fn run_from(&self, q: usize, word: &[Symbol]) -> Result<Option<usize>, AutomatonError> {
        if q >= self.num_states() {
            return Err(AutomatonError::InvalidState(q));
        }
        let mut cur = Some(q);
        for &c in word {
            if !self.alphabet.contains(c) {
                return Err(AutomatonError::UnknownSymbol(c.0));
            }
            cur = cur.and_then(|u| self.transition(u, c));
        }
        Ok(cur)
    }

    /// δ̂(s, word).
    pub fn run(&self, word: &[Symbol]) -> Result<Option<usize>, AutomatonError> {
        self.run_from(self.source(), word)
    }

    pub fn accepts(&self, word: &[Symbol]) -> Result<bool, AutomatonError> {
        Ok(self.run(word)?.is_some_and(|q| self.finals[q]))
    }

    /// Checks determinism, input-consistency, the source having no incoming
    /// edges, reachability from the source and co-reachability of a final
    /// state. An empty list means every assumption holds. A single state with
    /// no edges is accepted whether or not it is final, so the empty language
    /// has a valid automaton.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.num_states();
        let source = self.source();
        let mut out = Vec::new();

        for u in 0..n {
            for w in self.labels_from(u).windows(2) {
                if w[0] == w[1] {
                    out.push(Violation::NonDeterministic { state: u, symbol: w[0] });
                }
            }
        }
        for (u, c, v) in self.edges() {
            if v == source {
                out.push(Violation::SourceHasIncoming { from: u, symbol: c });
            } else if c != self.in_labels[v] {
                out.push(Violation::InputInconsistent {
                    state: v,
                    expected: self.in_labels[v],
                    found: c,
                    from: u,
                });
            }
        }

        let reached = self.reachable();
        out.extend(
            (0..n)
                .filter(|&u| !reached[u])
                .map(|state| Violation::Unreachable { state }),
        );
        if n == 1 && self.num_edges() == 0 {
            return out;
        }
        let coreached = self.coreachable();
        out.extend(
            (0..n)
                .filter(|&u| !coreached[u])
                .map(|state| Violation::NoFinalReachable { state }),
        );
        out
    }

    /// States reachable from the source.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack = vec![self.source()];
        seen[self.source()] = true;
        while let Some(u) = stack.pop() {
            for &v in self.targets_from(u) {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    stack.push(v as usize);
                }
            }
        }
        seen
    }

    /// States from which a final state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut rev_off = vec![0u32; n + 1];
        for &v in &self.targets {
            rev_off[v as usize + 1] += 1;
        }
        for i in 0..n {
            rev_off[i + 1] += rev_off[i];
        }
        let mut fill = rev_off.clone();
        let mut rev = vec![0u32; self.targets.len()];
        for (u, _, v) in self.edges() {
            rev[fill[v] as usize] = u as u32;
            fill[v] += 1;
        }
        let mut seen = self.finals.clone();
        let mut stack: Vec<usize> = (0..n).filter(|&u| seen[u]).collect();
        while let Some(v) = stack.pop() {
            for &u in &rev[rev_off[v] as usize..rev_off[v + 1] as usize] {
                if !seen[u as usize] {
                    seen[u as usize] = true;
                    stack.push(u as usize);
                }
            }
        }
        seen
    }

    /// Removes every state that is unreachable or reaches no final state,
    /// except the source. Surviving states keep their relative order.
    pub fn trim(&self) -> Wdfa {
        let reached = self.reachable();
        let coreached = self.coreachable();
        let keep: Vec<bool> = (0..self.num_states())
            .map(|u| u == self.source() || (reached[u] && coreached[u]))
            .collect();
        let mut new_id = vec![NONE; self.num_states()];
        let mut next = 0u32;
        for u in 0..self.num_states() {
            if keep[u] {
                new_id[u] = next;
                next += 1;
            }
        }
        let finals = (0..self.num_states())
            .filter(|&u| keep[u])
            .map(|u| self.finals[u])
            .collect();
        let edges: Vec<_> = self
            .edges()
            .filter(|&(u, _, v)| keep[u] && keep[v])
            .map(|(u, c, v)| (new_id[u] as usize, c, new_id[v] as usize))
            .collect();
        Wdfa::from_edges(
            self.alphabet.clone(),
            finals,
            new_id[self.source()] as usize,
            edges,
        )
        .expect("trimming preserves well-formedness")
    }

    /// Same automaton with the final flag of `u` set to `value`.
    pub fn with_final(&self, u: usize, value: bool) -> Wdfa {
        let mut b = self.clone();
        b.finals[u] = value;
        b
    }
}

/// Whether `a` and `b` recognize the same language.
pub fn language_equivalent(a: &Wdfa, b: &Wdfa) -> Result<bool, AutomatonError> {
    Ok(distinguishing_word(a, b)?.is_none())
}

/// A shortest word accepted by exactly one of `a` and `b`, found by a
/// breadth-first search of the product automaton. Undefined transitions lead
/// to an implicit dead state on either side.
pub fn distinguishing_word(a: &Wdfa, b: &Wdfa) -> Result<Option<Vec<Symbol>>, AutomatonError> {
    if a.alphabet() != b.alphabet() {
        return Err(AutomatonError::AlphabetMismatch);
    }
    let dead_a = a.num_states() as u32;
    let dead_b = b.num_states() as u32;
    let accepting = |p: u32, q: u32| {
        let fa = p != dead_a && a.is_final(p as usize);
        let fb = q != dead_b && b.is_final(q as usize);
        (fa, fb)
    };

    let start = (a.source, b.source);
    let mut parent: HashMap<(u32, u32), Option<((u32, u32), Symbol)>> = HashMap::new();
    parent.insert(start, None);
    let mut queue = VecDeque::from([start]);
    let mut labels = Vec::new();
    while let Some((p, q)) = queue.pop_front() {
        let (fa, fb) = accepting(p, q);
        if fa != fb {
            let mut word = Vec::new();
            let mut cur = (p, q);
            while let Some(Some((prev, c))) = parent.get(&cur) {
                word.push(*c);
                cur = *prev;
            }
            word.reverse();
            return Ok(Some(word));
        }
        labels.clear();
        if p != dead_a {
            labels.extend_from_slice(a.labels_from(p as usize));
        }
        if q != dead_b {
            labels.extend_from_slice(b.labels_from(q as usize));
        }
        labels.sort_unstable();
        labels.dedup();
        for &c in &labels {
            let np = if p == dead_a {
                dead_a
            } else {
                a.transition(p as usize, c).map_or(dead_a, |v| v as u32)
            };
            let nq = if q == dead_b {
                dead_b
            } else {
                b.transition(q as usize, c).map_or(dead_b, |v| v as u32)
            };
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry((np, nq)) {
                e.insert(Some(((p, q), c)));
                queue.push_back((np, nq));
            }
        }
    }
    Ok(None)
}
