mod common;

use proptest::prelude::*;
use roadsync::srcpw::{
    abb_coloring, decide, decide_abb, decide_with_witness, in_class_oracle, k3_membership, k3_witness,
    recolor_abb_to_aba, FixedWordClass,
};
use roadsync::{Coloring, Multigraph, StateSet};

fn graph_strategy(max_t: usize) -> impl Strategy<Value = Multigraph> {
    (1..=max_t).prop_flat_map(|t| {
        proptest::collection::vec(proptest::collection::vec(0..t, 2), t)
            .prop_map(|out| Multigraph::new(out).unwrap())
    })
}

fn resets_to_one(g: &Multigraph, c: &Coloring, w: &[usize]) -> bool {
    g.apply_coloring(c).unwrap().is_reset_word(w).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn color_swap_symmetry(g in graph_strategy(6)) {
        for class in FixedWordClass::ALL {
            let w = class.word();
            let swapped: Vec<usize> = w.iter().map(|&l| 1 - l).collect();
            prop_assert_eq!(
                in_class_oracle(&g, &w).unwrap().is_some(),
                in_class_oracle(&g, &swapped).unwrap().is_some()
            );
        }
    }

    #[test]
    fn witnesses_reset_by_their_word(g in graph_strategy(8)) {
        for class in FixedWordClass::ALL {
            if let Some(c) = decide_with_witness(&g, class).unwrap() {
                prop_assert!(resets_to_one(&g, &c, &class.word()));
            }
        }
        if decide_abb(&g).unwrap() {
            let c = abb_coloring(&g).unwrap().unwrap();
            prop_assert!(resets_to_one(&g, &c, &[0, 1, 1]));
        }
        if let Some((c, class)) = k3_witness(&g).unwrap() {
            prop_assert!(resets_to_one(&g, &c, &class.word()));
        }
        prop_assert_eq!(k3_witness(&g).unwrap().is_some(), k3_membership(&g).unwrap());
    }

    #[test]
    fn class_shapes_exclude_earlier_classes(g in graph_strategy(7)) {
        let hits: Vec<bool> = FixedWordClass::ALL.iter().map(|&c| decide(&g, c).unwrap()).collect();
        if hits[0] {
            prop_assert_eq!(hits.iter().filter(|&&h| h).count(), 1);
        }
        if hits[3] {
            prop_assert!(!hits[2]);
        }
    }

    #[test]
    fn shorter_words_are_covered(g in graph_strategy(5)) {
        let short = [vec![], vec![0], vec![0, 0], vec![0, 1]];
        if short.iter().any(|w| in_class_oracle(&g, w).unwrap().is_some()) {
            prop_assert!(k3_membership(&g).unwrap());
        }
    }
}

#[test]
fn cycle_case() {
    // q = 0, r = 1: 0 -b-> 1 -b-> 0 under c; vertex 2 feeds in by a.
    let g = Multigraph::new(vec![vec![2, 1], vec![2, 0], vec![0, 1]]).unwrap();
    let c = Coloring::identity(3, 2);
    let a = g.apply_coloring(&c).unwrap();
    assert_eq!(a.apply_word(&StateSet::full(3), &[0, 1, 1]).unwrap(), StateSet::singleton(3, 0));
    assert!(!decide(&g, FixedWordClass::Aaa).unwrap());
    let c2 = recolor_abb_to_aba(&g, &c).unwrap();
    let b = g.apply_coloring(&c2).unwrap();
    assert_eq!(b.step(0, 1), 1);
    assert_eq!(b.step(1, 0), 0);
    assert_eq!(b.apply_word(&StateSet::full(3), &[0, 1, 0]).unwrap(), StateSet::singleton(3, 0));
}

#[test]
fn swap_set_is_never_empty() {
    // Under abb the last letter is b, so some b-edge always enters q and an
    // empty swap set (which would leave the coloring unchanged) never occurs.
    let mut rng = common::rng(11);
    let mut seen = 0;
    for _ in 0..20_000 {
        let g = common::random_graph(&mut rng, 5, 2);
        if decide(&g, FixedWordClass::Aaa).unwrap() {
            continue;
        }
        for c in g.enumerate_colorings().unwrap() {
            let a = g.apply_coloring(&c).unwrap();
            let img = a.apply_word(&StateSet::full(5), &[0, 1, 1]).unwrap();
            if img.len() != 1 {
                continue;
            }
            let q = img.iter().next().unwrap();
            let q_in_a = (0..5).any(|s| a.step(s, 0) == q);
            let no_b_into_q = (0..5).all(|s| a.step(s, 1) != q);
            if q_in_a && no_b_into_q {
                assert_eq!(recolor_abb_to_aba(&g, &c).unwrap(), c);
                seen += 1;
            }
        }
    }
    assert_eq!(seen, 0);
}

#[test]
fn abb_instance_found_and_built() {
    // No graph with t <= 4 lies in abb minus (aba or aaa); the first ones
    // appear at t = 5.
    for t in 1..=4 {
        common::for_each_multiset_graph(t, 2, |g| assert!(!decide_abb(g).unwrap()));
    }
    let mut found = None;
    common::for_each_multiset_graph(5, 2, |g| {
        if found.is_none() && decide_abb(g).unwrap() {
            found = Some(g.clone());
        }
    });
    let g = found.expect("some t = 5 graph lies only in the abb class");
    let c = abb_coloring(&g).unwrap().unwrap();
    assert!(resets_to_one(&g, &c, &[0, 1, 1]));
    assert!(in_class_oracle(&g, &[0, 1, 0]).unwrap().is_none());
    assert!(in_class_oracle(&g, &[0, 0, 0]).unwrap().is_none());
}
