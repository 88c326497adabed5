mod common;

use proptest::prelude::*;
use roadsync::reduction::{
    abaa, augment_tautologies, build_reduction, extract_coloring, extract_coloring_with, reach_exactly,
    sat_oracle, Cnf3, LiteralChoice,
};
use roadsync::{Multigraph, StateSet};

fn sample() -> Cnf3 {
    Cnf3::from_signed(4, &[[1, -2, 3], [1, 2, 4], [-1, -3, 4]]).unwrap()
}

fn formula_strategy(max_n: usize, max_m: usize) -> impl Strategy<Value = Cnf3> {
    (1..=max_n as i64, 1..=max_m).prop_flat_map(|(n, m)| {
        let lit = (1..=n, any::<bool>()).prop_map(|(v, neg)| if neg { -v } else { v });
        proptest::collection::vec([lit.clone(), lit.clone(), lit], m)
            .prop_map(move |cs| Cnf3::from_signed(n as usize, &cs).unwrap())
    })
}

#[test]
fn sample_matches_the_golden_adjacency() {
    let golden = Multigraph::parse(include_str!("fixtures/sample_graph.txt")).unwrap();
    let f = Cnf3::parse_dimacs(include_str!("fixtures/sample.cnf")).unwrap();
    assert_eq!(f, sample());
    let rg = build_reduction(&f).unwrap();
    assert_eq!(rg.graph, golden);
    assert_eq!(rg.graph.t(), 5 * 3 + 3 * 4 + 8);
    // Literal edges of the first clause: C_{1,1} -> x1, ~x2 and C_{1,2} -> x3.
    assert_eq!(rg.graph.out_edges(rg.c(1, 1)), [rg.x(1), rg.x_bar(2)]);
    assert_eq!(rg.graph.out_edges(rg.c(1, 2))[0], rg.x(3));
    // The two reachability facts the proof relies on.
    let d4 = rg.sink();
    assert!(!reach_exactly(&rg.graph, rg.d(0), 3).contains(d4));
    assert!(!reach_exactly(&rg.graph, rg.d(6), 3).contains(d4));
    assert_eq!(reach_exactly(&rg.graph, rg.c(1, 0), 4).iter().filter(|&q| q == d4).count(), 1);
}

#[test]
fn sample_assignment_and_the_free_third_variable() {
    let rg = build_reduction(&sample()).unwrap();
    let t = rg.graph.t();
    let assignment = [true, false, false, true];
    let c = extract_coloring(&rg, &assignment).unwrap();
    let sink = StateSet::singleton(t, rg.sink());
    let reset = |c: &roadsync::Coloring| {
        rg.graph.apply_coloring(c).unwrap().apply_word(&StateSet::full(t), &abaa()).unwrap()
    };
    assert_eq!(reset(&c), sink);
    // No clause routes to x3 or ~x3, so V_3 may be colored either way.
    let mut flipped = c.clone();
    flipped.swap_at(rg.x_bar(3), 0, 1);
    flipped.swap_at(rg.w(3), 0, 1);
    assert_ne!(flipped, c);
    assert_eq!(reset(&flipped), sink);
    // Flipping a variable that some clause routes to breaks the reset.
    let mut broken = c.clone();
    broken.swap_at(rg.x_bar(2), 0, 1);
    broken.swap_at(rg.w(2), 0, 1);
    assert_ne!(reset(&broken), sink);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn structure_of_random_gadgets(f in formula_strategy(4, 4)) {
        let aug = augment_tautologies(&f);
        prop_assert_eq!(&aug.clauses[..f.m()], &f.clauses[..]);
        prop_assert!(aug.has_positive_occurrences());
        prop_assert_eq!(sat_oracle(&aug).unwrap().is_some(), sat_oracle(&f).unwrap().is_some());
        let rg = build_reduction(&aug).unwrap();
        let g = &rg.graph;
        prop_assert_eq!(g.t(), 5 * aug.m() + 3 * aug.n + 8);
        prop_assert_eq!(g.out_degree_uniform(), Some(2));
        prop_assert!(g.is_strongly_connected());
        prop_assert!(g.is_admissible());
        for (idx, c) in aug.clauses.iter().enumerate() {
            let l = c.map(|lit| rg.literal_vertex(lit));
            prop_assert_eq!(g.out_edges(rg.c(idx + 1, 1)), &[l[0], l[1]][..]);
            prop_assert_eq!(g.out_edges(rg.c(idx + 1, 2))[0], l[2]);
        }
        prop_assert_eq!(Cnf3::parse_dimacs(&f.to_dimacs()).unwrap(), f);
    }

    #[test]
    fn every_satisfying_assignment_gives_a_witness(f in formula_strategy(4, 4)) {
        let aug = augment_tautologies(&f);
        let rg = build_reduction(&aug).unwrap();
        let t = rg.graph.t();
        for bits in 0u32..1 << aug.n {
            let a: Vec<bool> = (0..aug.n).map(|i| bits >> i & 1 == 1).collect();
            if !aug.satisfied_by(&a) {
                prop_assert!(extract_coloring(&rg, &a).is_err());
                continue;
            }
            for choice in [LiteralChoice::FirstSatisfied, LiteralChoice::LastSatisfied] {
                let c = extract_coloring_with(&rg, &a, choice).unwrap();
                let img = rg.graph.apply_coloring(&c).unwrap().apply_word(&StateSet::full(t), &abaa()).unwrap();
                prop_assert_eq!(img, StateSet::singleton(t, rg.sink()));
            }
        }
    }
}

#[test]
fn unaugmented_or_empty_formulas_are_rejected() {
    let neg = Cnf3::from_signed(2, &[[-1, -2, -2]]).unwrap();
    assert!(build_reduction(&neg).is_err());
    assert!(build_reduction(&Cnf3::new(0, vec![]).unwrap()).is_err());
}
