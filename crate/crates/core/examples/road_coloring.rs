//! Synchronizing road colorings with a length bound: exhaustive oracle and
//! the exact search agree on the answer and the shortest length.

use roadsync::letters::render_word;
use roadsync::srcp::{srcp_decide, srcp_oracle, srcp_search};
use roadsync::Multigraph;

fn main() -> roadsync::Result<()> {
    let g = Multigraph::parse("graph 4 2\n1 2\n2 3\n3 0\n0 1\n")?;
    println!("admissible: {}", g.is_admissible());
    println!("road colorable: {}", g.is_road_colorable());
    println!("colorings: {}", g.coloring_count().unwrap());

    for k in 0..=5 {
        let yes = srcp_decide(&g, k)?;
        let oracle = srcp_oracle(&g, k)?;
        assert_eq!(yes, oracle.is_some());
        println!("k = {k}: {}", if yes { "YES" } else { "NO" });
    }

    let best = srcp_search(&g, 5)?.expect("some coloring resets within 5");
    let a = g.apply_coloring(&best.coloring)?;
    assert!(a.is_reset_word(&best.word)?);
    println!("\nshortest over all colorings: {} (into state {})", render_word(&best.word, 2), best.target);
    print!("{}", g.to_text_with_coloring(&best.coloring)?);
    Ok(())
}
