//! Kernelization: parallel edges beyond what a word of length k can use are
//! dropped, and bounds at or above z(t) collapse to a fixed trivial instance.

use roadsync::srcp::{kernelize, srcp_search};
use roadsync::sync::pin_bound;
use roadsync::Multigraph;

fn main() -> roadsync::Result<()> {
    let row = "0 0 0 0 0 1 1 1 1 2 2 2\n";
    let g = Multigraph::parse(&format!("graph 3 12\n{row}{row}{row}"))?;
    println!("z(3) = {}", pin_bound(3));

    for k in 1..=5 {
        let kern = kernelize(&g, k)?;
        let before = srcp_search(&g, k)?.is_some();
        let after = srcp_search(&kern.graph, kern.k)?.is_some();
        assert_eq!(before, after);
        println!(
            "k = {k}: kernel t = {}, out-degree {}, resolved {:?}, answer {}",
            kern.graph.t(),
            kern.graph.out_degree_uniform().unwrap(),
            kern.resolved,
            if after { "YES" } else { "NO" }
        );
    }
    print!("\n{}", kernelize(&g, 3)?.graph.to_text()?);
    Ok(())
}
