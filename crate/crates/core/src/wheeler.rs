//! Wheeler orders: checking the three axioms for a candidate order, and
//! computing the order of an unsorted WDFA.
//!
//! The axioms, for a total order `<` on the states:
//!
//! * (i) the source comes first;
//! * (ii) edges with smaller labels enter smaller states;
//! * (iii) equally labeled edges leaving `u < v` enter `u' <= v'`.
//!
//! Both (ii) and (iii) say that, listing every edge by (label, position of
//! the origin), target positions never decrease and strictly increase whenever
//! the label changes. [`verify_axioms`] checks exactly that with one bucket
//! pass over the edges.

use std::fmt;

use thiserror::Error;

use crate::alphabet::Symbol;
use crate::automaton::{Violation, Wdfa, NONE};

/// A bijection from state ids to positions `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WheelerOrder {
    position: Vec<u32>,
    certified: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrderError {
    #[error("order has {found} entries, automaton has {expected} states")]
    WrongLength { expected: usize, found: usize },
    #[error("position {0} is used twice or out of range")]
    NotBijective(usize),
}

/// An edge in original state ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeRef {
    pub from: usize,
    pub symbol: Symbol,
    pub to: usize,
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -{}-> {}", self.from + 1, self.symbol.0, self.to + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    /// (i): the source is not the smallest state.
    SourceNotFirst { source: usize, position: usize },
    /// (ii): `first` has the smaller label but does not enter a smaller state.
    LabelOrder { first: EdgeRef, second: EdgeRef },
    /// (iii): same label, `first` leaves the smaller state but enters a larger one.
    SameLabelOrder { first: EdgeRef, second: EdgeRef },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::SourceNotFirst { source, position } => write!(
                f,
                "source-first axiom: source {} is at position {}",
                source + 1,
                position + 1
            ),
            AxiomViolation::LabelOrder { first, second } => {
                write!(f, "label-order axiom: edges {first} and {second}")
            }
            AxiomViolation::SameLabelOrder { first, second } => {
                write!(f, "order-preservation axiom: edges {first} and {second}")
            }
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SortError {
    #[error("automaton breaks structural assumptions: {}", .0[0])]
    Invalid(Vec<Violation>),
    #[error("states {0} and {1} cannot be told apart by any incoming path")]
    Tie(usize, usize),
    #[error("automaton is not Wheeler: {0}")]
    NotWheeler(AxiomViolation),
}

impl WheelerOrder {
    /// State `u` at position `u`. Not certified.
    pub fn identity(n: usize) -> Self {
        WheelerOrder {
            position: (0..n as u32).collect(),
            certified: false,
        }
    }

    /// `positions[u]` is the position of state `u`.
    pub fn from_positions(positions: Vec<usize>) -> Result<Self, OrderError> {
        let n = positions.len();
        let mut used = vec![false; n];
        for &p in &positions {
            if p >= n || used[p] {
                return Err(OrderError::NotBijective(p));
            }
            used[p] = true;
        }
        Ok(WheelerOrder {
            position: positions.into_iter().map(|p| p as u32).collect(),
            certified: false,
        })
    }

    /// Order listing `states` first to last.
    pub fn from_sequence(states: &[usize]) -> Result<Self, OrderError> {
        let mut positions = vec![usize::MAX; states.len()];
        for (p, &u) in states.iter().enumerate() {
            if u >= states.len() || positions[u] != usize::MAX {
                return Err(OrderError::NotBijective(p));
            }
            positions[u] = p;
        }
        Self::from_positions(positions)
    }

    pub fn len(&self) -> usize {
        self.position.len()
    }

    pub fn is_empty(&self) -> bool {
        self.position.is_empty()
    }

    pub fn position(&self, u: usize) -> usize {
        self.position[u] as usize
    }

    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.position.iter().map(|&p| p as usize)
    }

    /// States listed by increasing position.
    pub fn sequence(&self) -> Vec<usize> {
        let mut seq = vec![0; self.len()];
        for (u, &p) in self.position.iter().enumerate() {
            seq[p as usize] = u;
        }
        seq
    }

    pub fn is_identity(&self) -> bool {
        self.position.iter().enumerate().all(|(u, &p)| u == p as usize)
    }

    /// True once the order has passed [`verify_axioms`] via [`WheelerOrder::certify`].
    pub fn is_certified(&self) -> bool {
        self.certified
    }

    /// Checks the axioms on `a` and marks the order certified if they hold.
    pub fn certify(mut self, a: &Wdfa) -> Result<Self, CertifyError> {
        let violations = verify_axioms(a, &self)?;
        if !violations.is_empty() {
            return Err(CertifyError::Violations(violations));
        }
        self.certified = true;
        Ok(self)
    }

    /// The automaton with state `u` renamed to `position(u)`.
    pub fn apply(&self, a: &Wdfa) -> Wdfa {
        assert_eq!(self.len(), a.num_states(), "order does not fit automaton");
        let mut finals = vec![false; a.num_states()];
        for u in 0..a.num_states() {
            finals[self.position(u)] = a.is_final(u);
        }
        let edges = a
            .edges()
            .map(|(u, c, v)| (self.position(u), c, self.position(v)));
        Wdfa::from_edges(
            a.alphabet().clone(),
            finals,
            self.position(a.source()),
            edges,
        )
        .expect("relabeling preserves well-formedness")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertifyError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("order breaks the Wheeler axioms: {}", .0[0])]
    Violations(Vec<AxiomViolation>),
}

/// Lists violations of axioms (i)–(iii) for `order` on `a`; empty iff `order`
/// is a Wheeler order. Runs in `O(n + m + sigma)`.
pub fn verify_axioms(a: &Wdfa, order: &WheelerOrder) -> Result<Vec<AxiomViolation>, OrderError> {
    let n = a.num_states();
    if order.len() != n {
        return Err(OrderError::WrongLength {
            expected: n,
            found: order.len(),
        });
    }
    let mut out = Vec::new();
    let sp = order.position(a.source());
    if sp != 0 {
        out.push(AxiomViolation::SourceNotFirst {
            source: a.source(),
            position: sp,
        });
    }

    // bucket edges by label, visiting origins by increasing position
    let sigma = a.alphabet().len();
    let mut start = vec![0usize; sigma + 2];
    for u in 0..n {
        for &c in a.labels_from(u) {
            start[c.0 as usize + 1] += 1;
        }
    }
    for i in 0..=sigma {
        start[i + 1] += start[i];
    }
    let mut bucket = vec![(0u32, 0u32); a.num_edges()];
    for u in order.sequence() {
        for (&c, &v) in a.labels_from(u).iter().zip(a.targets_from(u)) {
            let slot = &mut start[c.0 as usize];
            bucket[*slot] = (u as u32, v);
            *slot += 1;
        }
    }

    let mut prev: Option<(Symbol, u32, u32)> = None;
    let mut cursor = 0;
    for code in 0..=sigma {
        let c = Symbol(code as u16);
        let end = start[code];
        for &(u, v) in &bucket[cursor..end] {
            if let Some((pc, pu, pv)) = prev {
                let (tp, tc) = (order.position(pv as usize), order.position(v as usize));
                let first = EdgeRef { from: pu as usize, symbol: pc, to: pv as usize };
                let second = EdgeRef { from: u as usize, symbol: c, to: v as usize };
                if pc < c && tp >= tc {
                    out.push(AxiomViolation::LabelOrder { first, second });
                } else if pc == c && order.position(pu as usize) < order.position(u as usize) && tp > tc {
                    out.push(AxiomViolation::SameLabelOrder { first, second });
                }
            }
            prev = Some((c, u, v));
        }
        cursor = end;
    }
    Ok(out)
}

/// Computes the Wheeler order of `a`.
///
/// In a WDFA, two states with the same incoming label are ordered like any of
/// their predecessors, so the order is the co-lexicographic order of the
/// root-to-node label strings in any spanning tree rooted at the source. Those
/// strings are ranked by prefix doubling over ancestor pointers, with a
/// two-pass counting sort per round (`O(n log n)` overall). The result is then
/// checked with [`verify_axioms`]; a failure means `a` has no Wheeler order.
pub fn sort(a: &Wdfa) -> Result<WheelerOrder, SortError> {
    let violations = a.validate();
    if !violations.is_empty() {
        return Err(SortError::Invalid(violations));
    }
    let n = a.num_states();
    let source = a.source();

    let mut parent = vec![NONE; n];
    for (u, _, v) in a.edges() {
        if parent[v] == NONE {
            parent[v] = u as u32;
        }
    }
    parent[source] = NONE;

    let mut rank: Vec<u32> = a.in_labels().iter().map(|c| c.0 as u32).collect();
    let mut jump = parent;
    let mut buf = vec![0u32; n];
    let mut idx: Vec<u32> = (0..n as u32).collect();
    let mut next_rank = vec![0u32; n];

    loop {
        let second = |u: usize, rank: &[u32], jump: &[u32]| match jump[u] {
            NONE => 0,
            p => rank[p as usize] + 1,
        };
        let max_rank = rank.iter().copied().max().unwrap_or(0) as usize;
        counting_sort(&mut idx, &mut buf, max_rank + 2, |u| second(u, &rank, &jump));
        counting_sort(&mut idx, &mut buf, max_rank + 1, |u| rank[u]);

        let mut distinct = 0u32;
        let mut tie = None;
        for w in 0..n {
            let u = idx[w] as usize;
            if w > 0 {
                let p = idx[w - 1] as usize;
                let same = rank[p] == rank[u] && second(p, &rank, &jump) == second(u, &rank, &jump);
                if same {
                    tie = Some((p, u));
                } else {
                    distinct += 1;
                }
            }
            next_rank[u] = distinct;
        }
        std::mem::swap(&mut rank, &mut next_rank);

        if distinct as usize + 1 == n {
            break;
        }
        let mut any_jump = false;
        for u in 0..n {
            let j = jump[u];
            next_rank[u] = if j == NONE { NONE } else { jump[j as usize] };
            any_jump |= next_rank[u] != NONE;
        }
        if !any_jump {
            let (p, u) = tie.expect("fewer ranks than states implies a tie");
            return Err(SortError::Tie(p.min(u), p.max(u)));
        }
        std::mem::swap(&mut jump, &mut next_rank);
    }

    let order = WheelerOrder {
        position: rank,
        certified: false,
    };
    match order.certify(a) {
        Ok(order) => Ok(order),
        Err(CertifyError::Violations(v)) => Err(SortError::NotWheeler(v[0].clone())),
        Err(CertifyError::Order(e)) => unreachable!("ranks form a permutation: {e}"),
    }
}

/// Stable counting sort of `idx` by `key`, with keys in `0..buckets`.
fn counting_sort(idx: &mut [u32], buf: &mut [u32], buckets: usize, key: impl Fn(usize) -> u32) {
    let mut count = vec![0usize; buckets + 1];
    for &u in idx.iter() {
        count[key(u as usize) as usize + 1] += 1;
    }
    for i in 0..buckets {
        count[i + 1] += count[i];
    }
    for &u in idx.iter() {
        let k = key(u as usize) as usize;
        buf[count[k]] = u;
        count[k] += 1;
    }
    idx.copy_from_slice(buf);
}

/// Sorts `a` and renumbers its states by Wheeler position.
pub fn sorted(a: &Wdfa) -> Result<(Wdfa, WheelerOrder), SortError> {
    let order = sort(a)?;
    Ok((order.apply(a), order))
}

/// True if the identity order is a Wheeler order of `a`.
pub fn is_sorted(a: &Wdfa) -> bool {
    verify_axioms(a, &WheelerOrder::identity(a.num_states()))
        .map(|v| v.is_empty())
        .unwrap_or(false)
}
