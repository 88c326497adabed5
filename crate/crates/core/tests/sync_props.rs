mod common;

use proptest::prelude::*;
use roadsync::sync::{is_synchronizing, pin_bound, shortest_reset_word, syn_decide};
use roadsync::{cerny_automaton, Dfa, StateSet};

fn dfa_strategy(max_t: usize, max_k: usize) -> impl Strategy<Value = Dfa> {
    (1..=max_t, 1..=max_k).prop_flat_map(|(t, k)| {
        proptest::collection::vec(proptest::collection::vec(0..t, k), t)
            .prop_map(move |rows| Dfa::new(t, k, &rows).unwrap())
    })
}

proptest! {
    #[test]
    fn bfs_matches_brute_force(a in dfa_strategy(4, 3)) {
        // Every reset word of a 4-state automaton has length <= 9 if it is shortest.
        let bfs = shortest_reset_word(&a, None);
        let brute = common::brute_shortest_reset(&a, 9);
        prop_assert_eq!(bfs, brute);
    }

    #[test]
    fn pair_test_agrees_with_search(a in dfa_strategy(7, 3)) {
        let w = shortest_reset_word(&a, None);
        prop_assert_eq!(is_synchronizing(&a), w.is_some());
        if let Some(w) = w {
            prop_assert!(a.is_reset_word(&w).unwrap());
            prop_assert!(w.len() as u64 <= pin_bound(a.t() as u64));
        }
    }

    #[test]
    fn limit_is_respected(a in dfa_strategy(6, 2), k in 0usize..8) {
        let full = shortest_reset_word(&a, None);
        let limited = shortest_reset_word(&a, Some(k));
        match full {
            Some(w) if w.len() <= k => prop_assert_eq!(limited, Some(w)),
            _ => prop_assert_eq!(limited, None),
        }
        prop_assert_eq!(syn_decide(&a, k), shortest_reset_word(&a, Some(k)).is_some());
    }

    #[test]
    fn images_compose(a in dfa_strategy(6, 3), u in proptest::collection::vec(0usize..3, 0..6), v in proptest::collection::vec(0usize..3, 0..6)) {
        let k = a.alphabet_size();
        let u: Vec<usize> = u.into_iter().map(|l| l % k).collect();
        let v: Vec<usize> = v.into_iter().map(|l| l % k).collect();
        let full = StateSet::full(a.t());
        let uv: Vec<usize> = u.iter().chain(&v).copied().collect();
        let step = a.apply_word(&a.apply_word(&full, &u).unwrap(), &v).unwrap();
        prop_assert_eq!(a.apply_word(&full, &uv).unwrap(), step);
        let trace = a.activity_trace(&uv).unwrap();
        prop_assert_eq!(trace.len(), uv.len() + 1);
        for pair in trace.windows(2) {
            prop_assert!(pair[1].len() <= pair[0].len());
        }
    }

    #[test]
    fn text_round_trip(a in dfa_strategy(8, 4)) {
        prop_assert_eq!(Dfa::parse(&a.to_text()).unwrap(), a);
    }

    #[test]
    fn clone_padding_keeps_the_shortest_word(a in dfa_strategy(5, 3), target in 0usize..5) {
        // Extra states copy the transitions of one original state, so every
        // nonempty word has the same image; 70 states leave the u64 masks.
        prop_assume!(a.t() >= 2);
        let s = target % a.t();
        let big = Dfa::from_fn(70, a.alphabet_size(), |q, l| a.step(if q < a.t() { q } else { s }, l)).unwrap();
        prop_assert_eq!(shortest_reset_word(&big, None), shortest_reset_word(&a, None));
        prop_assert_eq!(is_synchronizing(&big), is_synchronizing(&a));
    }

    #[test]
    fn identity_letter_changes_nothing(a in dfa_strategy(5, 2)) {
        let b = a.with_identity_letter();
        prop_assert_eq!(
            shortest_reset_word(&a, None).map(|w| w.len()),
            shortest_reset_word(&b, None).map(|w| w.len())
        );
    }
}

#[test]
fn cerny_words_are_lexicographically_least() {
    for n in 2..=5 {
        let c = cerny_automaton(n).unwrap();
        let bfs = shortest_reset_word(&c, None).unwrap();
        assert_eq!(Some(bfs), common::brute_shortest_reset(&c, (n - 1) * (n - 1)));
    }
}
