//! Shortest reset words of the Cerny automata, against the (t^3 - t)/6 bound.

use roadsync::letters::render_word;
use roadsync::sync::{is_synchronizing, pin_bound, shortest_reset_word, syn_decide};
use roadsync::{cerny_automaton, StateSet};

fn main() -> roadsync::Result<()> {
    println!("{:>3} {:>6} {:>6}  word", "n", "length", "z(n)");
    for n in 2..=8 {
        let a = cerny_automaton(n)?;
        assert!(is_synchronizing(&a));
        let w = shortest_reset_word(&a, None).expect("Cerny automata synchronize");
        assert_eq!(w.len(), (n - 1) * (n - 1));
        println!("{n:>3} {:>6} {:>6}  {}", w.len(), pin_bound(n as u64), render_word(&w, 2));
    }

    // How the active set shrinks along the word for n = 4.
    let a = cerny_automaton(4)?;
    let w = shortest_reset_word(&a, None).unwrap();
    let trace = a.activity_trace(&w)?;
    let sizes: Vec<usize> = trace.iter().map(StateSet::len).collect();
    println!("\nactive set sizes along {}: {sizes:?}", render_word(&w, 2));
    println!("reset within 8 letters: {}", syn_decide(&a, 8));
    println!("reset within 9 letters: {}", syn_decide(&a, 9));
    Ok(())
}
