#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};
use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wheelermin::automaton::Wdfa;
use wheelermin::format::parse_wdfa;
use wheelermin::oracle::{random_wdfa, RandomWdfaParams};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn running_example() -> Wdfa {
    let text = std::fs::read_to_string(data_path("running_example.wdfa")).unwrap();
    let f = parse_wdfa(&text).unwrap();
    assert!(f.sorted);
    f.automaton
}

/// 1-based state pair to the 0-based id of its left state.
pub fn pair(i: usize, j: usize) -> usize {
    assert_eq!(j, i + 1);
    i - 1
}

pub fn corpus(seed: u64, count: usize, params: &RandomWdfaParams) -> Vec<Wdfa> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_wdfa(&mut rng, params)).collect()
}

/// Every pair `(δ̂(x, α), δ̂(y, α))` over all strings `α` for which both
/// runs are defined, found by breadth-first search over state pairs.
pub fn reached_pairs(a: &Wdfa, x: usize, y: usize) -> Vec<(usize, usize)> {
    let mut seen = HashSet::from([(x, y)]);
    let mut queue = VecDeque::from([(x, y)]);
    let mut out = Vec::new();
    while let Some((p, q)) = queue.pop_front() {
        out.push((p, q));
        for c in a.alphabet().symbols() {
            if let (Some(p2), Some(q2)) = (a.transition(p, c), a.transition(q, c)) {
                if seen.insert((p2, q2)) {
                    queue.push_back((p2, q2));
                }
            }
        }
    }
    out
}
