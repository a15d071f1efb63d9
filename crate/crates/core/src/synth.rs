//! Synthetic DNA inputs for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::Wdfa;
use crate::dbg::{DbgError, KmerSet, NPolicy};

pub fn random_dna<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<u8> {
    (0..len).map(|_| b"ACGT"[rng.gen_range(0..4)]).collect()
}

/// `count` substrings of `genome` of length `len` (or the whole genome if it
/// is shorter), with each base replaced by a random one with probability
/// `error_rate`.
pub fn sample_reads<R: Rng + ?Sized>(
    rng: &mut R,
    genome: &[u8],
    count: usize,
    len: usize,
    error_rate: f64,
) -> Vec<Vec<u8>> {
    let len = len.min(genome.len());
    (0..count)
        .map(|_| {
            let start = rng.gen_range(0..=genome.len() - len);
            genome[start..start + len]
                .iter()
                .map(|&c| if rng.gen_bool(error_rate) { b"ACGT"[rng.gen_range(0..4)] } else { c })
                .collect()
        })
        .collect()
}

/// The k-mers of one random genome sized so that its de Bruijn WDFA has
/// `nodes` states, barring repeated k-mers (negligible for `k` near 28).
/// No genome gives exactly `k` states; that request yields `k + 1`.
pub fn genome_kmers(nodes: usize, k: usize, seed: u64) -> Result<KmerSet, DbgError> {
    // a genome of length L >= k yields L - k + 1 k-mers and k dummies
    let len = if nodes > k { nodes - 1 } else { nodes };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let genome = random_dna(&mut rng, len);
    KmerSet::from_sequences([genome.as_slice()], k, NPolicy::Split)
}

pub fn genome_wdfa(nodes: usize, k: usize, seed: u64) -> Result<Wdfa, DbgError> {
    Ok(genome_kmers(nodes, k, seed)?.build_wdfa())
}
