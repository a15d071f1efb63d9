mod common;

use std::collections::BTreeSet;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wheelermin::dbg::{ingest, KmerSet, NPolicy};
use wheelermin::minimize::minimize_sorted;
use wheelermin::synth::{random_dna, sample_reads};
use wheelermin::wheeler::{is_sorted, verify_axioms, WheelerOrder};

/// Node strings and labeled edges computed with plain strings.
fn naive(seqs: &[&str], k: usize) -> (Vec<String>, BTreeSet<(String, char, String)>) {
    let mut nodes = BTreeSet::from([String::new()]);
    let mut edges = BTreeSet::new();
    for s in seqs {
        for j in 1..k.min(s.len()) {
            nodes.insert(s[..j].to_string());
            edges.insert((s[..j - 1].to_string(), s.as_bytes()[j - 1] as char, s[..j].to_string()));
        }
        if s.len() < k {
            continue;
        }
        edges.insert((s[..k - 1].to_string(), s.as_bytes()[k - 1] as char, s[..k].to_string()));
        for i in 0..=s.len() - k {
            nodes.insert(s[i..i + k].to_string());
        }
        for i in 0..s.len() - k {
            let w = &s[i..i + k + 1];
            edges.insert((w[..k].to_string(), w.as_bytes()[k] as char, w[1..].to_string()));
        }
    }
    let mut nodes: Vec<String> = nodes.into_iter().collect();
    nodes.sort_by(|x, y| x.bytes().rev().cmp(y.bytes().rev()));
    (nodes, edges)
}

fn built(seqs: &[&str], k: usize) -> (Vec<String>, BTreeSet<(String, char, String)>) {
    let ks = KmerSet::from_sequences(seqs.iter().map(|s| s.as_bytes()), k, NPolicy::Split).unwrap();
    let a = ks.build_wdfa();
    let names = ks.node_strings();
    let edges = a
        .edges()
        .map(|(u, c, v)| {
            (names[u].clone(), a.alphabet().char_of(c).unwrap() as char, names[v].clone())
        })
        .collect();
    assert_eq!(a.num_edges(), ks.num_wdfa_edges());
    (names, edges)
}

#[test]
fn matches_string_construction() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..300 {
        let k = rng.gen_range(1..=6);
        let letters = rng.gen_range(1..=4);
        let reads: Vec<String> = (0..rng.gen_range(1..6))
            .map(|_| {
                let len = rng.gen_range(0..20);
                (0..len).map(|_| b"ACGT"[rng.gen_range(0..letters)] as char).collect()
            })
            .collect();
        let refs: Vec<&str> = reads.iter().map(String::as_str).collect();
        assert_eq!(built(&refs, k), naive(&refs, k), "{refs:?} k={k}");
    }
}

#[test]
fn acgt_order_two() {
    let (nodes, edges) = built(&["ACGT"], 2);
    assert_eq!(nodes, vec!["", "A", "AC", "CG", "GT"]);
    assert_eq!(edges.len(), 4);
}

#[test]
fn random_reads_are_sorted_wdfas() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..50 {
        let genome = random_dna(&mut rng, 300);
        let reads = sample_reads(&mut rng, &genome, 40, 60, 0.01);
        let ks = KmerSet::from_sequences(reads.iter().map(Vec::as_slice), 4, NPolicy::Split).unwrap();
        let a = ks.build_wdfa();
        assert!(a.validate().is_empty());
        assert!(verify_axioms(&a, &WheelerOrder::identity(a.num_states())).unwrap().is_empty());
        assert!(is_sorted(&a));
    }
}

/// Every word reaching a state ends with that state's string, truncated to
/// the word length: checked edge by edge, which covers all words by induction.
#[test]
fn states_spell_the_suffix_of_every_word_reaching_them() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..100 {
        let k = rng.gen_range(1..=5);
        let reads: Vec<Vec<u8>> = (0..3)
            .map(|_| {
                let len = rng.gen_range(0..15);
                random_dna(&mut rng, len)
            })
            .collect();
        let ks = KmerSet::from_sequences(reads.iter().map(Vec::as_slice), k, NPolicy::Split).unwrap();
        let a = ks.build_wdfa();
        let names = ks.node_strings();
        assert_eq!(names[a.source()], "");
        for (u, c, v) in a.edges() {
            let mut w = names[u].clone();
            w.push(a.alphabet().char_of(c).unwrap() as char);
            let tail = &w[w.len().saturating_sub(k)..];
            assert_eq!(names[v], tail);
        }
        assert!(a.reachable().iter().all(|&r| r));
        let kmers: BTreeSet<String> = ks.kmer_strings().into_iter().collect();
        let long: BTreeSet<String> = names.into_iter().filter(|s| s.len() == k).collect();
        assert_eq!(long, kmers);
    }
}

#[test]
fn n_policies_differ_only_on_short_pieces() {
    let seqs: [&[u8]; 2] = [b"ACGTNACNNGGTACCA", b"nnacgtacgt"];
    let split = KmerSet::from_sequences(seqs, 3, NPolicy::Split).unwrap();
    let skip = KmerSet::from_sequences(seqs, 3, NPolicy::Skip).unwrap();
    assert_eq!(split.kmer_strings(), skip.kmer_strings());
    // the short piece "GA" contributes its proper prefix "G" under split only
    let extra: Vec<&[u8]> = vec![b"ACGTNGA"];
    let split = KmerSet::from_sequences(extra.clone(), 3, NPolicy::Split).unwrap();
    let skip = KmerSet::from_sequences(extra, 3, NPolicy::Skip).unwrap();
    assert_eq!(split.dummy_strings(), vec!["", "A", "G", "AC"]);
    assert_eq!(skip.dummy_strings(), vec!["", "A", "AC"]);
    for ks in [split, skip] {
        assert!(is_sorted(&ks.build_wdfa()));
    }
}

#[test]
fn ingest_is_independent_of_thread_count() {
    let dir = tempdir();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let genome = random_dna(&mut rng, 2000);
    let mut paths = Vec::new();
    for f in 0..5 {
        let p = dir.join(format!("r{f}.fa"));
        let mut file = std::fs::File::create(&p).unwrap();
        for (i, r) in sample_reads(&mut rng, &genome, 30, 100, 0.02).iter().enumerate() {
            writeln!(file, ">r{i}\n{}", String::from_utf8_lossy(r)).unwrap();
        }
        paths.push(p);
    }
    let one = ingest(&paths, 12, NPolicy::Split, 1).unwrap();
    for t in [2, 3, 8] {
        assert_eq!(ingest(&paths, 12, NPolicy::Split, t).unwrap(), one);
    }
    std::fs::remove_dir_all(dir).unwrap();
}

fn tempdir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("wheelermin-dbg-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn real_reads_shrink() {
    let path = common::data_path("reads_SRR1749083_head.fq");
    let ks = ingest(&[path], 28, NPolicy::Split, 1).unwrap();
    let a = ks.build_wdfa();
    assert!(a.num_states() > 100_000);
    let m = minimize_sorted(&a).unwrap();
    assert!(m.automaton.num_states() < a.num_states());
    assert!(minimize_sorted(&m.automaton).unwrap().partition.is_identity());
}
