//! Order-k de Bruijn WDFAs over the DNA alphabet.
//!
//! Nodes are the distinct k-mers of the input plus "dummy" nodes for the
//! prefixes shorter than k of every input sequence, so that each k-mer is
//! reachable from the empty-string source. An edge joins the two k-mers of
//! every (k+1)-mer and is labeled by its last character; dummy chains add
//! one edge per character. Nodes are emitted in co-lexicographic order of
//! their strings, which is the Wheeler order.
//!
//! Strings are 2-bit packed (`A=0 C=1 G=2 T=3`) with the first character in
//! the most significant position, so `k <= 31` keeps a (k+1)-mer in a `u64`.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::alphabet::{Alphabet, Symbol};
use crate::automaton::Wdfa;
use crate::seqio::{self, SeqError};

pub const MAX_K: usize = 31;

/// What to do with characters outside `ACGT` (case-insensitive).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NPolicy {
    /// Cut the sequence there; every piece is treated as its own sequence.
    #[default]
    Split,
    /// Drop k-mers that contain such characters; pieces too short to hold a
    /// k-mer contribute nothing, longer ones get a dummy chain for their
    /// first k-mer.
    Skip,
}

#[derive(Debug, Error)]
pub enum DbgError {
    #[error("k must be at least 1")]
    KTooSmall,
    #[error("k = {k} exceeds the maximum of {max}")]
    KTooLarge { k: usize, max: usize },
    #[error(transparent)]
    Seq(#[from] SeqError),
}

fn code(c: u8) -> Option<u64> {
    match c {
        b'A' | b'a' => Some(0),
        b'C' | b'c' => Some(1),
        b'G' | b'g' => Some(2),
        b'T' | b't' => Some(3),
        _ => None,
    }
}

fn unpack(v: u64, len: usize) -> String {
    (0..len)
        .rev()
        .map(|i| b"ACGT"[((v >> (2 * i)) & 3) as usize] as char)
        .collect()
}

/// Reverses the 32 two-bit groups of `x`. A string packed in the low bits
/// comes out reversed and left-aligned, so integer order on the results is
/// co-lexicographic order with shorter strings padded by `A`.
fn reverse_pairs(x: u64) -> u64 {
    let x = x.swap_bytes();
    let x = ((x >> 4) & 0x0F0F_0F0F_0F0F_0F0F) | ((x & 0x0F0F_0F0F_0F0F_0F0F) << 4);
    ((x >> 2) & 0x3333_3333_3333_3333) | ((x & 0x3333_3333_3333_3333) << 2)
}

/// Sort key of a packed string: co-lexicographic, a proper suffix first.
fn colex_key(v: u64, len: usize) -> (u64, u8) {
    (reverse_pairs(v), len as u8)
}

/// Accumulates k-mers, (k+1)-mers and dummies from sequences.
#[derive(Clone, Debug)]
pub struct KmerSetBuilder {
    k: usize,
    policy: NPolicy,
    kmers: Vec<u64>,
    edges: Vec<u64>,
    starts: Vec<u64>,
    dummies: Vec<(u8, u64)>,
}

impl KmerSetBuilder {
    pub fn new(k: usize, policy: NPolicy) -> Result<Self, DbgError> {
        if k == 0 {
            return Err(DbgError::KTooSmall);
        }
        if k > MAX_K {
            return Err(DbgError::KTooLarge { k, max: MAX_K });
        }
        Ok(KmerSetBuilder {
            k,
            policy,
            kmers: Vec::new(),
            edges: Vec::new(),
            starts: Vec::new(),
            dummies: Vec::new(),
        })
    }

    pub fn add_sequence(&mut self, seq: &[u8]) {
        for piece in seq.split(|&c| code(c).is_none()) {
            if self.policy == NPolicy::Skip && piece.len() < self.k {
                continue;
            }
            // an all-ACGT sequence is one piece, possibly empty
            self.add_fragment(piece);
        }
    }

    fn add_fragment(&mut self, frag: &[u8]) {
        let k = self.k;
        let mut v = 0u64;
        for (j, &c) in frag.iter().enumerate().take(k) {
            self.dummies.push((j as u8, v));
            v = (v << 2) | code(c).expect("fragment is ACGT");
        }
        if frag.len() < k {
            return;
        }
        let kmask = (1u64 << (2 * k)) - 1;
        let emask = if k + 1 == 32 { u64::MAX } else { (1u64 << (2 * (k + 1))) - 1 };
        self.starts.push(v);
        self.kmers.push(v);
        let mut w = v;
        for &c in &frag[k..] {
            w = ((w << 2) | code(c).expect("fragment is ACGT")) & emask;
            self.edges.push(w);
            self.kmers.push(w & kmask);
        }
    }

    /// Adds everything collected by `other`.
    pub fn merge(&mut self, mut other: KmerSetBuilder) {
        assert_eq!(self.k, other.k, "merging builders of different order");
        self.kmers.append(&mut other.kmers);
        self.edges.append(&mut other.edges);
        self.starts.append(&mut other.starts);
        self.dummies.append(&mut other.dummies);
    }

    pub fn finish(mut self) -> KmerSet {
        for v in [&mut self.kmers, &mut self.edges, &mut self.starts] {
            v.sort_unstable();
            v.dedup();
        }
        self.dummies.push((0, 0));
        self.dummies.sort_unstable();
        self.dummies.dedup();
        KmerSet {
            k: self.k,
            kmers: self.kmers,
            edges: self.edges,
            starts: self.starts,
            dummies: self.dummies,
        }
    }
}

/// Distinct k-mers, (k+1)-mers, sequence-initial k-mers and dummy prefixes
/// (including the empty string) of an input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KmerSet {
    k: usize,
    kmers: Vec<u64>,
    edges: Vec<u64>,
    starts: Vec<u64>,
    dummies: Vec<(u8, u64)>,
}

/// Per-input counts reported by the builder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KmerStats {
    pub k: usize,
    pub kmers: usize,
    pub dummies: usize,
    pub nodes: usize,
    pub edges: usize,
}

impl KmerSet {
    pub fn from_sequences<'a, I>(seqs: I, k: usize, policy: NPolicy) -> Result<KmerSet, DbgError>
    where
        I: IntoIterator<Item = &'a [u8]>,
    {
        let mut b = KmerSetBuilder::new(k, policy)?;
        for s in seqs {
            b.add_sequence(s);
        }
        Ok(b.finish())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_kmers(&self) -> usize {
        self.kmers.len()
    }

    pub fn num_dummies(&self) -> usize {
        self.dummies.len()
    }

    /// Distinct (k+1)-mers.
    pub fn num_edge_mers(&self) -> usize {
        self.edges.len()
    }

    /// Edges of [`KmerSet::build_wdfa`]: one per (k+1)-mer, one into each
    /// non-empty dummy and one into each sequence-initial k-mer.
    pub fn num_wdfa_edges(&self) -> usize {
        self.edges.len() + self.dummies.len() - 1 + self.starts.len()
    }

    pub fn stats(&self) -> KmerStats {
        KmerStats {
            k: self.k,
            kmers: self.num_kmers(),
            dummies: self.num_dummies(),
            nodes: self.num_kmers() + self.num_dummies(),
            edges: self.num_wdfa_edges(),
        }
    }

    /// The k-mers in lexicographic order.
    pub fn kmer_strings(&self) -> Vec<String> {
        self.kmers.iter().map(|&v| unpack(v, self.k)).collect()
    }

    /// The dummy strings, shortest first.
    pub fn dummy_strings(&self) -> Vec<String> {
        self.dummies.iter().map(|&(j, v)| unpack(v, j as usize)).collect()
    }

    /// Node strings in Wheeler (co-lexicographic) order.
    pub fn node_strings(&self) -> Vec<String> {
        self.sorted_keys()
            .into_iter()
            .map(|(key, len)| unpack(reverse_pairs(key), len as usize))
            .collect()
    }

    fn sorted_keys(&self) -> Vec<(u64, u8)> {
        let mut keys: Vec<(u64, u8)> = self
            .dummies
            .iter()
            .map(|&(j, v)| colex_key(v, j as usize))
            .chain(self.kmers.iter().map(|&v| colex_key(v, self.k)))
            .collect();
        keys.sort_unstable();
        keys
    }

    /// The de Bruijn WDFA, states numbered in Wheeler order. The source is
    /// the empty string; every other state is final.
    pub fn build_wdfa(&self) -> Wdfa {
        let k = self.k;
        let keys = self.sorted_keys();
        let id = |v: u64, len: usize| -> usize {
            keys.binary_search(&colex_key(v, len))
                .expect("every referenced string is a node")
        };
        let sym = |v: u64| Symbol((v & 3) as u16 + 1);
        let kmask = (1u64 << (2 * k)) - 1;

        let mut edges = Vec::with_capacity(self.num_wdfa_edges());
        for &x in &self.edges {
            edges.push((id(x >> 2, k), sym(x), id(x & kmask, k)));
        }
        for &(j, v) in &self.dummies {
            if j > 0 {
                edges.push((id(v >> 2, j as usize - 1), sym(v), id(v, j as usize)));
            }
        }
        for &s in &self.starts {
            edges.push((id(s >> 2, k - 1), sym(s), id(s, k)));
        }

        let mut finals = vec![true; keys.len()];
        finals[0] = false;
        Wdfa::from_edges(Alphabet::dna(), finals, 0, edges).expect("de Bruijn edges are in range")
    }
}

/// Reads every file in `paths` and collects its k-mers, spreading files over
/// up to `threads` workers. The result does not depend on `threads`.
pub fn ingest(paths: &[PathBuf], k: usize, policy: NPolicy, threads: usize) -> Result<KmerSet, DbgError> {
    let mut total = KmerSetBuilder::new(k, policy)?;
    let threads = threads.clamp(1, paths.len().max(1));
    let read_all = |files: &[PathBuf]| -> Result<KmerSetBuilder, DbgError> {
        let mut b = KmerSetBuilder::new(k, policy)?;
        for p in files {
            read_file(p, &mut b)?;
        }
        Ok(b)
    };
    if threads == 1 {
        total.merge(read_all(paths)?);
    } else {
        let chunk = paths.len().div_ceil(threads);
        let parts: Vec<Result<KmerSetBuilder, DbgError>> = std::thread::scope(|s| {
            let handles: Vec<_> = paths
                .chunks(chunk)
                .map(|files| s.spawn(move || read_all(files)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("ingest worker panicked"))
                .collect()
        });
        for part in parts {
            total.merge(part?);
        }
    }
    Ok(total.finish())
}

fn read_file(path: &Path, b: &mut KmerSetBuilder) -> Result<(), DbgError> {
    seqio::for_each_sequence(path, |s| b.add_sequence(s))?;
    Ok(())
}
