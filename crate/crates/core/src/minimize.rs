//! Minimization of sorted WDFAs: collapse every maximal run of adjacent
//! states whose pairs were left unmarked in the border graph.

use std::ops::Range;

use thiserror::Error;

use crate::automaton::{Violation, Wdfa};
use crate::border::{build_with_base_marks, mark_reachable, BorderError, BorderGraph};
use crate::wheeler::{self, SortError};

/// An equivalence on states whose classes are intervals of consecutive ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    class_of: Vec<u32>,
    starts: Vec<u32>,
}

impl Partition {
    /// Every state alone.
    pub fn identity(n: usize) -> Self {
        Partition::from_merges(n, |_| false)
    }

    /// Classes are the runs obtained by merging `i` with `i + 1` whenever
    /// `merge(i)` holds.
    pub fn from_merges(n: usize, mut merge: impl FnMut(usize) -> bool) -> Self {
        let mut class_of = Vec::with_capacity(n);
        let mut starts = Vec::with_capacity(n + 1);
        for u in 0..n {
            if u == 0 || !merge(u - 1) {
                starts.push(u as u32);
            }
            class_of.push(starts.len() as u32 - 1);
        }
        starts.push(n as u32);
        Partition { class_of, starts }
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.starts.len() - 1
    }

    pub fn class_of(&self, u: usize) -> usize {
        self.class_of[u] as usize
    }

    pub fn class(&self, c: usize) -> Range<usize> {
        self.starts[c] as usize..self.starts[c + 1] as usize
    }

    pub fn classes(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        (0..self.num_classes()).map(|c| self.class(c))
    }

    /// Classes with more than one state.
    pub fn merged_classes(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        self.classes().filter(|r| r.len() > 1)
    }

    pub fn is_identity(&self) -> bool {
        self.num_classes() == self.len()
    }
}

/// Merges `i` and `i + 1` exactly when they form an unmarked border-graph node.
pub fn compute_equivalence(a: &Wdfa, g: &BorderGraph) -> Partition {
    Partition::from_merges(a.num_states(), |i| g.contains(i) && !g.is_marked(i))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuotientError {
    #[error("partition covers {found} states, automaton has {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("states {0} and {1} share a class but have different incoming labels")]
    MixedLabels(usize, usize),
    #[error("states {0} and {1} share a class but differ in finality")]
    MixedFinality(usize, usize),
    #[error("states {0} and {1} share a class but have different outgoing labels")]
    MixedOutLabels(usize, usize),
    #[error("states {0} and {1} share a class but their successors on symbol {2} do not")]
    SplitSuccessors(usize, usize, u16),
}

/// Checks that classes are λ-homogeneous and right-invariant, comparing each
/// member with the first state of its class.
pub fn check_right_invariant(a: &Wdfa, p: &Partition) -> Result<(), QuotientError> {
    if p.len() != a.num_states() {
        return Err(QuotientError::WrongLength {
            expected: a.num_states(),
            found: p.len(),
        });
    }
    for range in p.merged_classes() {
        let rep = range.start;
        for u in range.start + 1..range.end {
            if a.in_label(u) != a.in_label(rep) {
                return Err(QuotientError::MixedLabels(rep, u));
            }
            if a.is_final(u) != a.is_final(rep) {
                return Err(QuotientError::MixedFinality(rep, u));
            }
            if a.labels_from(u) != a.labels_from(rep) {
                return Err(QuotientError::MixedOutLabels(rep, u));
            }
            let pairs = a.targets_from(rep).iter().zip(a.targets_from(u));
            for ((&x, &y), &c) in pairs.zip(a.labels_from(u)) {
                if p.class_of(x as usize) != p.class_of(y as usize) {
                    return Err(QuotientError::SplitSuccessors(rep, u, c.0));
                }
            }
        }
    }
    Ok(())
}

/// The quotient automaton `a / p`. Classes become states numbered by class
/// index; a class takes the finality and outgoing edges of its first member,
/// after checking that every member agrees with it.
pub fn quotient(a: &Wdfa, p: &Partition) -> Result<Wdfa, QuotientError> {
    check_right_invariant(a, p)?;
    Ok(quotient_unchecked(a, p))
}

fn quotient_unchecked(a: &Wdfa, p: &Partition) -> Wdfa {
    let k = p.num_classes();
    let mut offsets = Vec::with_capacity(k + 1);
    let mut labels = Vec::with_capacity(a.num_edges());
    let mut targets = Vec::with_capacity(a.num_edges());
    let mut finals = Vec::with_capacity(k);
    let mut in_labels = Vec::with_capacity(k);
    offsets.push(0u32);
    for range in p.classes() {
        // every member has the representative's edges up to class renaming
        let rep = range.start;
        labels.extend_from_slice(a.labels_from(rep));
        targets.extend(a.targets_from(rep).iter().map(|&v| p.class_of(v as usize) as u32));
        finals.push(a.is_final(rep));
        in_labels.push(a.in_label(rep));
        offsets.push(labels.len() as u32);
    }
    Wdfa::from_raw(
        a.alphabet().clone(),
        p.class_of(a.source()) as u32,
        offsets,
        labels,
        targets,
        finals,
        in_labels,
    )
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MinimizeError {
    #[error("input breaks structural assumptions: {}", .0[0])]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Sort(#[from] SortError),
    #[error("input is not sorted: {0}")]
    Border(#[from] BorderError),
}

/// Intermediate products of one minimization run.
#[derive(Clone, Debug)]
pub struct Minimization {
    pub automaton: Wdfa,
    pub partition: Partition,
    pub border: BorderGraph,
}

/// Minimizes a WDFA whose state ids already are its Wheeler positions: border
/// graph, base marks, propagation, runs, quotient. `O(n + m)`.
///
/// The output's state ids are again Wheeler positions, since classes are
/// λ-homogeneous intervals numbered left to right. Debug builds also check
/// that the partition is right-invariant before quotienting.
pub fn minimize_sorted(a: &Wdfa) -> Result<Minimization, MinimizeError> {
    let border = marked_border_graph(a)?;
    let partition = compute_equivalence(a, &border);
    if cfg!(debug_assertions) {
        assert_right_invariant(a, &partition);
    }
    let automaton = quotient_unchecked(a, &partition);
    Ok(Minimization {
        automaton,
        partition,
        border,
    })
}

/// [`minimize_sorted`] without the debug-build check; the caller runs
/// [`assert_right_invariant`] when it wants it.
pub(crate) fn minimize_sorted_unchecked(a: &Wdfa) -> Result<Minimization, MinimizeError> {
    let border = marked_border_graph(a)?;
    let partition = compute_equivalence(a, &border);
    let automaton = quotient_unchecked(a, &partition);
    Ok(Minimization {
        automaton,
        partition,
        border,
    })
}

fn marked_border_graph(a: &Wdfa) -> Result<BorderGraph, BorderError> {
    let mut border = build_with_base_marks(a)?;
    mark_reachable(&mut border);
    Ok(border)
}

pub(crate) fn assert_right_invariant(a: &Wdfa, p: &Partition) {
    if let Err(e) = check_right_invariant(a, p) {
        panic!("border marking left a non-right-invariant partition: {e}");
    }
}

/// Minimum WDFA recognizing the language of `a`.
///
/// Input is validated first; if its state ids are not already a Wheeler order
/// it is sorted and renumbered.
pub fn minimize(a: &Wdfa) -> Result<Wdfa, MinimizeError> {
    let violations = a.validate();
    if !violations.is_empty() {
        return Err(MinimizeError::Invalid(violations));
    }
    let m = if wheeler::is_sorted(a) {
        minimize_sorted(a)?
    } else {
        let (sorted, _) = wheeler::sorted(a)?;
        minimize_sorted(&sorted)?
    };
    Ok(m.automaton)
}
