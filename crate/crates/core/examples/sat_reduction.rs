//! 3-SAT to road coloring with two letters and bound 4: a satisfying
//! assignment becomes a coloring reset by abaa into the sink D4.

use roadsync::reduction::{abaa, build_reduction, extract_coloring, sat_oracle, verify_reduction, Cnf3};
use roadsync::StateSet;

fn main() -> roadsync::Result<()> {
    let f = Cnf3::parse_dimacs("p cnf 4 3\n1 -2 3 0\n1 2 4 0\n-1 -3 4 0\n")?;
    let rg = build_reduction(&f)?;
    println!("{} clauses, {} variables -> {} vertices", f.m(), f.n, rg.graph.t());

    let assignment = sat_oracle(&f)?.expect("satisfiable");
    println!("assignment: {assignment:?}");
    let c = extract_coloring(&rg, &assignment)?;
    let a = rg.graph.apply_coloring(&c)?;
    let img = a.apply_word(&StateSet::full(a.t()), &abaa())?;
    println!("abaa maps every vertex to {}", rg.names[img.iter().next().unwrap()]);

    let report = verify_reduction(&f)?;
    println!("{report:#?}");
    assert!(report.all_hold());

    let unsat = Cnf3::from_signed(1, &[[1, 1, 1], [-1, -1, -1]])?;
    let report = verify_reduction(&unsat)?;
    println!("unsatisfiable formula: srcp = {}, all checks hold = {}", report.srcp, report.all_hold());
    Ok(())
}
