//! Components, periods, admissibility and DOT export of a small multigraph.

use roadsync::{Coloring, Multigraph};

fn main() -> roadsync::Result<()> {
    // A 4-cycle with a chord: period gcd(4, 3) = 1.
    let g = Multigraph::parse("graph 4 2\n1 1\n2 2\n3 0\n0 0\n")?;
    println!("sccs: {:?}", g.sccs());
    println!("strongly connected: {}", g.is_strongly_connected());
    println!("aperiodic: {}", g.is_aperiodic()?);
    println!("admissible: {}", g.is_admissible());
    println!("distances to 0: {:?}", g.distance_layers(0));

    // A plain cycle is periodic, so no coloring synchronizes it.
    let cycle = Multigraph::parse("graph 3 1\n1\n2\n0\n")?;
    println!("3-cycle aperiodic: {}", cycle.is_aperiodic()?);
    println!("3-cycle road colorable: {}", cycle.is_road_colorable());

    let c = Coloring::identity(4, 2);
    let names: Vec<String> = (0..4).map(|v| format!("v{v}")).collect();
    print!("\n{}", g.to_dot(Some(&c), Some(&names)));
    Ok(())
}
