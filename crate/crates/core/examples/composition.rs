//! Many small instances folded into one automaton whose bound is z(t) + 1.
//! The composed automaton resets within the bound exactly when one of the
//! items does.

use roadsync::composer::{compose, pattern_functions, preprocess, verify_c1_c2_c3, BatchInput, Preprocessed};
use roadsync::letters::render_word;
use roadsync::sync::{shortest_reset_word, syn_decide};
use roadsync::{cerny_automaton, Dfa};

fn main() -> roadsync::Result<()> {
    for (i, m) in [(6, 12), (11, 12), (1, 3)] {
        let (pt, pf) = pattern_functions(i, m)?;
        println!("item {i} of {m}: T rows {pt:?}, F rows {pf:?}");
    }

    // The Cerny automaton on 3 states needs 4 letters, so bound 3 is a NO
    // item; the second item has a letter that resets at once.
    let raw = BatchInput {
        t: 3,
        items: vec![(cerny_automaton(3)?, 3), (Dfa::new(3, 2, &[vec![1, 0], vec![2, 0], vec![0, 0]])?, 1)],
    };
    let Preprocessed::Batch(batch) = preprocess(&raw)? else {
        unreachable!("both bounds are below z(3)");
    };
    let ca = compose(&batch)?;
    println!("\ncomposed: {} states, {} letters, bound {}", ca.dfa.t(), ca.dfa.alphabet_size(), ca.d_prime);
    let w = shortest_reset_word(&ca.dfa, None).expect("the second item is a YES");
    let names: Vec<&str> = w.iter().map(|&l| ca.letter_names[l].as_str()).collect();
    println!("shortest reset word: {} = {}", render_word(&w, ca.dfa.alphabet_size()), names.join(" "));
    assert!(syn_decide(&ca.dfa, ca.d_prime));

    let report = verify_c1_c2_c3(&ca, &batch)?;
    println!("{report:?}");
    assert!(report.all_hold());
    Ok(())
}
