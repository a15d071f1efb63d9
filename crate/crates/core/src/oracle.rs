//! Brute-force reference implementations used to cross-check the linear
//! minimizer: naive Moore refinement for Myhill–Nerode equivalence, the
//! minimum WDFA obtained from it by run splitting, a position-wise
//! isomorphism test, and a generator of small random WDFAs.
//!
//! Nothing here shares code with the border-graph path.

use std::collections::{BTreeSet, HashMap};

use rand::Rng;
use thiserror::Error;

use crate::alphabet::Symbol;
use crate::automaton::Wdfa;
use crate::dbg::{KmerSetBuilder, NPolicy};
use crate::wheeler;

/// Classes of Myhill–Nerode equivalence, numbered by first occurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NerodePartition {
    class_of: Vec<u32>,
    num_classes: usize,
}

impl NerodePartition {
    pub fn class_of(&self, u: usize) -> usize {
        self.class_of[u] as usize
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn equivalent(&self, u: usize, v: usize) -> bool {
        self.class_of[u] == self.class_of[v]
    }
}

/// Refines {final, non-final} by (class, outgoing (symbol, successor class))
/// signatures until the number of classes stops growing. `O(n · m)`.
pub fn moore_partition(a: &Wdfa) -> NerodePartition {
    let n = a.num_states();
    let mut class_of: Vec<u32> = (0..n).map(|u| a.is_final(u) as u32).collect();
    let mut num_classes = usize::MAX;
    loop {
        let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut next = Vec::with_capacity(n);
        for u in 0..n {
            let mut sig = vec![class_of[u]];
            for (&c, &v) in a.labels_from(u).iter().zip(a.targets_from(u)) {
                sig.push(c.0 as u32);
                sig.push(class_of[v as usize]);
            }
            let fresh = ids.len() as u32;
            next.push(*ids.entry(sig).or_insert(fresh));
        }
        let count = ids.len();
        class_of = next;
        if count == num_classes {
            break;
        }
        num_classes = count;
    }
    NerodePartition { class_of, num_classes }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("state ids are not a Wheeler order")]
    NotSorted,
    #[error("automaton has {0} states; the oracle refuses more than {1}")]
    TooLarge(usize, usize),
}

/// Largest input the oracle accepts from the command line.
pub const MAX_ORACLE_STATES: usize = 10_000;

/// Minimum WDFA of a sorted `a`: Myhill–Nerode classes split into maximal
/// runs of consecutive, equally labeled states, then quotiented.
pub fn reference_min_wdfa(a: &Wdfa) -> Result<Wdfa, OracleError> {
    if !wheeler::is_sorted(a) {
        return Err(OracleError::NotSorted);
    }
    let nerode = moore_partition(a);
    let n = a.num_states();
    let mut class = vec![0usize; n];
    for u in 1..n {
        let same = a.in_label(u) == a.in_label(u - 1) && nerode.equivalent(u, u - 1);
        class[u] = class[u - 1] + usize::from(!same);
    }
    let k = class.last().map_or(0, |&c| c + 1);

    let mut finals = vec![false; k];
    let mut edges = BTreeSet::new();
    for u in 0..n {
        finals[class[u]] |= a.is_final(u);
        for (&c, &v) in a.labels_from(u).iter().zip(a.targets_from(u)) {
            edges.insert((class[u], c, class[v as usize]));
        }
    }
    Ok(Wdfa::from_edges(a.alphabet().clone(), finals, class[a.source()], edges)
        .expect("quotient of a valid automaton"))
}

/// True iff mapping the `i`-th state of `a` to the `i`-th state of `b`
/// preserves the source, incoming labels, finality and every transition.
/// For sorted WDFAs this decides isomorphism, as the Wheeler order is unique.
pub fn isomorphic(a: &Wdfa, b: &Wdfa) -> bool {
    if a.alphabet() != b.alphabet()
        || a.num_states() != b.num_states()
        || a.num_edges() != b.num_edges()
        || a.source() != b.source()
    {
        return false;
    }
    (0..a.num_states()).all(|u| {
        a.is_final(u) == b.is_final(u)
            && a.in_label(u) == b.in_label(u)
            && a.labels_from(u) == b.labels_from(u)
            && a.targets_from(u) == b.targets_from(u)
    })
}

/// Knobs for [`random_wdfa`].
#[derive(Clone, Debug)]
pub struct RandomWdfaParams {
    pub min_states: usize,
    pub max_states: usize,
    /// Number of DNA letters used, `1..=4`; fewer letters give more merges.
    pub letters: usize,
    pub max_k: usize,
    pub max_reads: usize,
    pub max_read_len: usize,
    /// Probability that a state with outgoing edges is made non-final.
    pub unfinal_prob: f64,
}

impl Default for RandomWdfaParams {
    fn default() -> Self {
        RandomWdfaParams {
            min_states: 5,
            max_states: 40,
            letters: 2,
            max_k: 4,
            max_reads: 5,
            max_read_len: 14,
            unfinal_prob: 0.3,
        }
    }
}

/// A random sorted WDFA: the de Bruijn automaton of a few random reads, with
/// some final flags cleared on states that have outgoing edges. Any state
/// that then reaches no final state is made final again, so the result keeps
/// every structural assumption.
pub fn random_wdfa<R: Rng + ?Sized>(rng: &mut R, params: &RandomWdfaParams) -> Wdfa {
    let letters = &b"ACGT"[..params.letters.clamp(1, 4)];
    loop {
        let k = rng.gen_range(1..=params.max_k);
        let mut builder = KmerSetBuilder::new(k, NPolicy::Split).expect("small k");
        for _ in 0..rng.gen_range(1..=params.max_reads) {
            let len = rng.gen_range(1..=params.max_read_len);
            let read: Vec<u8> = (0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect();
            builder.add_sequence(&read);
        }
        let a = builder.finish().build_wdfa();
        let n = a.num_states();
        if n < params.min_states || n > params.max_states {
            continue;
        }
        let mut a = a;
        for u in 0..n {
            if u != a.source() && a.out_degree(u) > 0 && rng.gen_bool(params.unfinal_prob) {
                a = a.with_final(u, false);
            }
        }
        let coreached = a.coreachable();
        for (u, &ok) in coreached.iter().enumerate() {
            if !ok {
                a = a.with_final(u, true);
            }
        }
        if rng.gen_bool(0.2) {
            a = a.with_final(a.source(), true);
        }
        return a;
    }
}

/// A random word: usually a random walk from the source, sometimes with one
/// letter replaced or appended, sometimes uniform noise.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, a: &Wdfa, max_len: usize) -> Vec<Symbol> {
    let sigma = a.alphabet().len() as u16;
    let uniform = |rng: &mut R| Symbol(rng.gen_range(1..=sigma));
    let len = rng.gen_range(0..=max_len);
    if rng.gen_bool(0.2) {
        return (0..len).map(|_| uniform(rng)).collect();
    }
    let mut word = Vec::with_capacity(len + 1);
    let mut q = a.source();
    while word.len() < len && a.out_degree(q) > 0 {
        let i = rng.gen_range(0..a.out_degree(q));
        word.push(a.labels_from(q)[i]);
        q = a.targets_from(q)[i] as usize;
    }
    match rng.gen_range(0..4) {
        0 if !word.is_empty() => {
            let i = rng.gen_range(0..word.len());
            word[i] = uniform(rng);
        }
        1 => word.push(uniform(rng)),
        _ => {}
    }
    word
}
