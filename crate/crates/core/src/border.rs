//! The border graph of a sorted WDFA and the two marking passes that find
//! every pair of Wheeler-adjacent states that must stay apart.
//!
//! Node `i` stands for the pair of states at positions `(i, i + 1)` and exists
//! when both states have the same incoming label. An edge `j -> i` records that
//! reading `λ(j)` from the pair `i` leads to the pair `j`, i.e.
//! `δ(i, c) = j` and `δ(i + 1, c) = j + 1`. Every node has at most one
//! outgoing edge, so the graph is stored as a successor array.

use std::fmt;

use thiserror::Error;

use crate::alphabet::Symbol;
use crate::automaton::{Wdfa, NONE};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mark {
    Unmarked,
    /// The two states differ in finality or in their outgoing labels.
    Base,
    /// Reaches a base-marked pair in the border graph.
    Propagated,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BorderError {
    #[error("source is at position {0}, not first")]
    SourceNotFirst(usize),
    #[error("incoming labels decrease between positions {0} and {1}")]
    LabelsNotSorted(usize, usize),
    #[error(
        "pair ({pair}, {}) reads symbol {} into non-adjacent states {left} and {right}",
        pair + 1,
        symbol.0
    )]
    NotAdjacent {
        pair: usize,
        symbol: Symbol,
        left: usize,
        right: usize,
    },
    #[error("pair ({0}, {next}) is reached from two different pairs", next = .0 + 1)]
    SecondPredecessor(usize),
}

#[derive(Clone, Debug)]
pub struct BorderGraph {
    /// `None` for pairs that are not nodes.
    slots: Vec<Option<Mark>>,
    succ: Vec<u32>,
    num_nodes: usize,
    num_edges: usize,
}

/// Builds the border graph of `a`, whose state ids must be Wheeler positions.
///
/// Unsorted input is detected when it shows: a source that is not state 0,
/// decreasing incoming labels, or an adjacent pair whose successors on some
/// symbol are distinct but not adjacent. Runs in `O(n + m)`.
pub fn build_border_graph(a: &Wdfa) -> Result<BorderGraph, BorderError> {
    build(a, false)
}

/// [`build_border_graph`] followed by [`mark_base_cases`], in one pass.
pub(crate) fn build_with_base_marks(a: &Wdfa) -> Result<BorderGraph, BorderError> {
    build(a, true)
}

fn differ(a: &Wdfa, i: usize) -> bool {
    a.is_final(i) != a.is_final(i + 1) || a.labels_from(i) != a.labels_from(i + 1)
}

fn build(a: &Wdfa, mark_base: bool) -> Result<BorderGraph, BorderError> {
    let n = a.num_states();
    if a.source() != 0 {
        return Err(BorderError::SourceNotFirst(a.source()));
    }
    let pairs = n.saturating_sub(1);
    let lambda = a.in_labels();
    let mut slots = vec![None; pairs];
    let mut succ = vec![NONE; pairs];
    let mut num_nodes = 0;
    let mut num_edges = 0;

    for i in 0..pairs {
        if lambda[i] > lambda[i + 1] {
            return Err(BorderError::LabelsNotSorted(i, i + 1));
        }
        if lambda[i] != lambda[i + 1] {
            continue;
        }
        num_nodes += 1;
        slots[i] = Some(if mark_base && differ(a, i) { Mark::Base } else { Mark::Unmarked });

        let (lc, lt) = (a.labels_from(i), a.targets_from(i));
        let (rc, rt) = (a.labels_from(i + 1), a.targets_from(i + 1));
        let (mut x, mut y) = (0, 0);
        while x < lc.len() && y < rc.len() {
            if lc[x] < rc[y] {
                x += 1;
            } else if lc[x] > rc[y] {
                y += 1;
            } else {
                let (v, w) = (lt[x] as usize, rt[y] as usize);
                if v != w {
                    if w != v + 1 {
                        return Err(BorderError::NotAdjacent {
                            pair: i,
                            symbol: lc[x],
                            left: v,
                            right: w,
                        });
                    }
                    match succ[v] {
                        NONE => {
                            succ[v] = i as u32;
                            num_edges += 1;
                        }
                        p if p as usize == i => {}
                        _ => return Err(BorderError::SecondPredecessor(v)),
                    }
                }
                x += 1;
                y += 1;
            }
        }
    }

    Ok(BorderGraph {
        slots,
        succ,
        num_nodes,
        num_edges,
    })
}

/// Marks every pair whose states differ in finality or in outgoing labels.
pub fn mark_base_cases(a: &Wdfa, g: &mut BorderGraph) {
    for i in 0..g.slots.len() {
        if g.slots[i].is_some() && differ(a, i) {
            g.slots[i] = Some(Mark::Base);
        }
    }
}

/// Marks every node reachable from a base-marked node. Each walk follows the
/// unique successor until it meets a marked node, so every node is visited
/// once.
pub fn mark_reachable(g: &mut BorderGraph) {
    for start in 0..g.slots.len() {
        if g.slots[start] != Some(Mark::Base) {
            continue;
        }
        let mut cur = g.succ[start];
        while cur != NONE && g.slots[cur as usize] == Some(Mark::Unmarked) {
            g.slots[cur as usize] = Some(Mark::Propagated);
            cur = g.succ[cur as usize];
        }
    }
}

impl BorderGraph {
    /// Number of adjacent pairs, `n - 1`.
    pub fn num_pairs(&self) -> usize {
        self.slots.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn contains(&self, i: usize) -> bool {
        matches!(self.slots.get(i), Some(Some(_)))
    }

    pub fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.slots.len()).filter(|&i| self.slots[i].is_some())
    }

    /// The pair that reaches pair `i` on one symbol, if any.
    pub fn successor(&self, i: usize) -> Option<usize> {
        match self.succ[i] {
            NONE => None,
            p => Some(p as usize),
        }
    }

    /// Edges `(from, to)` ordered by `from`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.succ.len()).filter_map(|i| self.successor(i).map(|p| (i, p)))
    }

    /// Incoming edges of every node.
    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut preds = vec![Vec::new(); self.succ.len()];
        for (i, p) in self.edges() {
            preds[p].push(i);
        }
        preds
    }

    /// Mark of node `i`; pairs that are not nodes read as unmarked.
    pub fn mark(&self, i: usize) -> Mark {
        self.slots[i].unwrap_or(Mark::Unmarked)
    }

    pub fn is_marked(&self, i: usize) -> bool {
        self.mark(i) != Mark::Unmarked
    }

    /// One entry per adjacent pair, `None` where the pair is not a node.
    pub fn slots(&self) -> &[Option<Mark>] {
        &self.slots
    }

    pub fn count_marks(&self, mark: Mark) -> usize {
        self.slots.iter().filter(|&&s| s == Some(mark)).count()
    }
}

/// A broken border-graph invariant found by [`check_border_graph`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BorderViolation {
    TooManyNodes(usize),
    TooManyEdges(usize),
    EdgeFromNonNode(usize),
    EdgeToNonNode(usize, usize),
    /// Edge `from -> to` does not satisfy `δ(to, c) = from`, `δ(to + 1, c) = from + 1`.
    BadEdge(usize, usize),
}

impl fmt::Display for BorderViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BorderViolation::TooManyNodes(k) => write!(f, "{k} nodes exceed n - 1"),
            BorderViolation::TooManyEdges(k) => write!(f, "{k} edges exceed n - 1"),
            BorderViolation::EdgeFromNonNode(i) => write!(f, "edge leaves non-node {i}"),
            BorderViolation::EdgeToNonNode(i, j) => write!(f, "edge {i} -> {j} enters a non-node"),
            BorderViolation::BadEdge(i, j) => write!(f, "edge {i} -> {j} is not a transition pair"),
        }
    }
}

/// Re-checks the size bounds and the defining equations of every edge.
pub fn check_border_graph(a: &Wdfa, g: &BorderGraph) -> Vec<BorderViolation> {
    let n = a.num_states();
    let mut out = Vec::new();
    let nodes = g.nodes().count();
    if nodes > n.saturating_sub(1) || nodes != g.num_nodes() {
        out.push(BorderViolation::TooManyNodes(nodes));
    }
    let edges = g.edges().count();
    if edges > n.saturating_sub(1) || edges != g.num_edges() {
        out.push(BorderViolation::TooManyEdges(edges));
    }
    for (from, to) in g.edges() {
        if !g.contains(from) {
            out.push(BorderViolation::EdgeFromNonNode(from));
            continue;
        }
        if !g.contains(to) {
            out.push(BorderViolation::EdgeToNonNode(from, to));
            continue;
        }
        let c = a.in_label(from);
        if a.transition(to, c) != Some(from) || a.transition(to + 1, c) != Some(from + 1) {
            out.push(BorderViolation::BadEdge(from, to));
        }
    }
    out
}
