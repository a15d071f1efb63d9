mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wheelermin::automaton::{language_equivalent, Wdfa};
use wheelermin::border::{build_border_graph, check_border_graph};
use wheelermin::format::{parse_wdfa, wdfa_to_string};
use wheelermin::minimize::{minimize, minimize_sorted};
use wheelermin::oracle::{isomorphic, moore_partition, random_wdfa, random_word, reference_min_wdfa, RandomWdfaParams};
use wheelermin::wheeler::{self, verify_axioms, WheelerOrder};

fn instance(seed: u64, letters: usize, max_states: usize) -> Wdfa {
    let params = RandomWdfaParams {
        letters,
        max_states,
        ..RandomWdfaParams::default()
    };
    random_wdfa(&mut ChaCha8Rng::seed_from_u64(seed), &params)
}

fn arb_wdfa() -> impl Strategy<Value = Wdfa> {
    (any::<u64>(), 1usize..=4, 10usize..=60).prop_map(|(s, l, n)| instance(s, l, n))
}

fn shuffled(a: &Wdfa, seed: u64) -> Wdfa {
    let mut seq: Vec<usize> = (0..a.num_states()).collect();
    seq.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    WheelerOrder::from_sequence(&seq).unwrap().apply(a)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn matches_reference(a in arb_wdfa()) {
        let m = minimize_sorted(&a).unwrap().automaton;
        prop_assert!(isomorphic(&m, &reference_min_wdfa(&a).unwrap()));
    }

    #[test]
    fn preserves_language(a in arb_wdfa(), seed in any::<u64>()) {
        let m = minimize_sorted(&a).unwrap().automaton;
        prop_assert!(language_equivalent(&a, &m).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            let w = random_word(&mut rng, &a, 12);
            prop_assert_eq!(a.accepts(&w).unwrap(), m.accepts(&w).unwrap());
        }
    }

    #[test]
    fn output_is_a_smaller_sorted_wdfa(a in arb_wdfa()) {
        let m = minimize_sorted(&a).unwrap().automaton;
        prop_assert!(m.validate().is_empty());
        prop_assert!(verify_axioms(&m, &WheelerOrder::identity(m.num_states())).unwrap().is_empty());
        prop_assert!(m.num_states() <= a.num_states());
        prop_assert!(m.num_edges() <= a.num_edges());
    }

    #[test]
    fn idempotent(a in arb_wdfa()) {
        let m = minimize_sorted(&a).unwrap().automaton;
        let again = minimize_sorted(&m).unwrap();
        prop_assert!(again.partition.is_identity());
        prop_assert_eq!(again.automaton, m);
    }

    #[test]
    fn border_graph_bounds(a in arb_wdfa()) {
        let g = build_border_graph(&a).unwrap();
        let n = a.num_states();
        prop_assert!(g.num_nodes() < n.max(1));
        prop_assert!(g.num_edges() < n.max(1));
        prop_assert!(check_border_graph(&a, &g).is_empty());
    }

    #[test]
    fn marks_are_exactly_the_inequivalent_pairs(a in arb_wdfa()) {
        let m = minimize_sorted(&a).unwrap();
        let nerode = moore_partition(&a);
        for i in m.border.nodes() {
            prop_assert_eq!(m.border.is_marked(i), !nerode.equivalent(i, i + 1), "pair {}", i);
        }
    }

    #[test]
    fn sorting_undoes_a_shuffle(a in arb_wdfa(), seed in any::<u64>()) {
        let b = shuffled(&a, seed);
        let order = wheeler::sort(&b).unwrap();
        prop_assert!(verify_axioms(&b, &order).unwrap().is_empty());
        prop_assert_eq!(order.apply(&b), a);
    }

    #[test]
    fn result_does_not_depend_on_state_ids(a in arb_wdfa(), seed in any::<u64>()) {
        let direct = minimize(&a).unwrap();
        let via_shuffle = minimize(&shuffled(&a, seed)).unwrap();
        prop_assert_eq!(direct, via_shuffle);
    }

    #[test]
    fn text_round_trip(a in arb_wdfa(), seed in any::<u64>()) {
        let f = parse_wdfa(&wdfa_to_string(&a, true)).unwrap();
        prop_assert!(f.sorted);
        prop_assert_eq!(&f.automaton, &a);
        let b = shuffled(&a, seed);
        let g = parse_wdfa(&wdfa_to_string(&b, false)).unwrap();
        prop_assert!(!g.sorted);
        prop_assert!(language_equivalent(&g.automaton, &b).unwrap());
        prop_assert_eq!(wheeler::sorted(&g.automaton).unwrap().0, a);
    }
}
