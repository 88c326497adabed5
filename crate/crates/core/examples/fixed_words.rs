//! Colorings reset by one fixed word of length 3 on out-degree 2 graphs, and
//! the length-3 problem as the union of the four classes.

use roadsync::srcpw::{decide, k3_witness, FixedWordClass};
use roadsync::Multigraph;

fn main() -> roadsync::Result<()> {
    let graphs = [
        ("abb only", "graph 5 2\n1 1\n2 3\n0 1\n1 4\n0 3\n"),
        ("reset loop", "graph 3 2\n0 0\n0 1\n0 2\n"),
        ("cycle", "graph 3 2\n1 2\n2 0\n0 1\n"),
    ];
    for (label, text) in graphs {
        let g = Multigraph::parse(text)?;
        let classes: Vec<String> = FixedWordClass::ALL
            .into_iter()
            .map(|c| Ok(format!("{c}:{}", if decide(&g, c)? { "Y" } else { "n" })))
            .collect::<roadsync::Result<_>>()?;
        print!("{label:<10} {}", classes.join(" "));
        match k3_witness(&g)? {
            Some((c, class)) => {
                let a = g.apply_coloring(&c)?;
                assert!(a.is_reset_word(&class.word())?);
                println!("  -> resets by {class}");
            }
            None => println!("  -> no coloring resets within 3"),
        }
    }
    Ok(())
}
