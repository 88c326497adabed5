//! From 3-SAT to synchronizing road coloring with two letters and reset
//! words of length 4.
//!
//! The graph has a fixed part D_0..D_7, three vertices x_i, x̄_i, W_i per
//! variable and five vertices C_{j,0..4} per clause. A satisfying
//! assignment gives a coloring reset by `abaa` into D_4; conversely every
//! length-4 reset coloring reads an assignment off the variable parts.

use std::fmt;

use crate::automaton::StateSet;
use crate::error::{invalid, Error, Result};
use crate::graph::{Coloring, Multigraph};
use crate::srcp::{canonical_words, find_coloring, srcp_search};
use crate::text::parse_usizes;
use crate::{State, Word};

/// Literal over variables numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lit {
    pub var: usize,
    pub negated: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Lit {
        Lit { var, negated: false }
    }

    pub fn neg(var: usize) -> Lit {
        Lit { var, negated: true }
    }

    /// `assignment[i]` is the value of variable `i + 1`.
    pub fn holds(self, assignment: &[bool]) -> bool {
        assignment[self.var - 1] != self.negated
    }

    fn dimacs(self) -> i64 {
        if self.negated {
            -(self.var as i64)
        } else {
            self.var as i64
        }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "~x{}", self.var)
        } else {
            write!(f, "x{}", self.var)
        }
    }
}

/// A CNF formula with exactly three literals per clause.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cnf3 {
    pub n: usize,
    pub clauses: Vec<[Lit; 3]>,
}

impl Cnf3 {
    pub fn new(n: usize, clauses: Vec<[Lit; 3]>) -> Result<Cnf3> {
        for (j, c) in clauses.iter().enumerate() {
            if let Some(l) = c.iter().find(|l| l.var == 0 || l.var > n) {
                return invalid(format!("clause {}: variable {} outside 1..={n}", j + 1, l.var));
            }
        }
        Ok(Cnf3 { n, clauses })
    }

    /// Builds from signed DIMACS-style literals.
    pub fn from_signed(n: usize, clauses: &[[i64; 3]]) -> Result<Cnf3> {
        let lit = |x: i64| -> Result<Lit> {
            match x {
                0 => invalid("literal 0"),
                x => Ok(Lit { var: x.unsigned_abs() as usize, negated: x < 0 }),
            }
        };
        let cs =
            clauses.iter().map(|c| Ok([lit(c[0])?, lit(c[1])?, lit(c[2])?])).collect::<Result<Vec<_>>>()?;
        Cnf3::new(n, cs)
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.n && self.clauses.iter().all(|c| c.iter().any(|l| l.holds(assignment)))
    }

    /// Every variable occurs at least once without negation.
    pub fn has_positive_occurrences(&self) -> bool {
        (1..=self.n).all(|v| self.clauses.iter().flatten().any(|l| *l == Lit::pos(v)))
    }

    /// Parses `p cnf <n> <m>` and m clauses of three literals, each ended by 0.
    /// Lines starting with `c` are comments.
    pub fn parse_dimacs(text: &str) -> Result<Cnf3> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('c') && !l.starts_with('%'));
        let header = lines.next().ok_or_else(|| Error::Invalid("missing `p cnf` header".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
            return invalid(format!("expected `p cnf <n> <m>`, got `{header}`"));
        }
        let nums = parse_usizes(&parts[2..].join(" "))?;
        let (n, m) = (nums[0], nums[1]);
        let mut clauses = Vec::with_capacity(m);
        let mut cur = Vec::new();
        for tok in lines.flat_map(str::split_whitespace) {
            let x: i64 =
                tok.parse().map_err(|_| Error::Invalid(format!("expected a literal, got `{tok}`")))?;
            if x != 0 {
                cur.push(x);
                continue;
            }
            if cur.len() != 3 {
                return invalid(format!(
                    "clause {} has {} literals, expected 3",
                    clauses.len() + 1,
                    cur.len()
                ));
            }
            clauses.push([cur[0], cur[1], cur[2]]);
            cur.clear();
        }
        if !cur.is_empty() {
            return invalid("last clause is not terminated by 0");
        }
        if clauses.len() != m {
            return invalid(format!("header announces {m} clauses, found {}", clauses.len()));
        }
        Cnf3::from_signed(n, &clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.n, self.m());
        for c in &self.clauses {
            s.push_str(&format!("{} {} {} 0\n", c[0].dimacs(), c[1].dimacs(), c[2].dimacs()));
        }
        s
    }
}

/// Appends `x_i ∨ x̄_i ∨ x̄_i` for every variable without a positive
/// occurrence. The added clauses are tautologies.
pub fn augment_tautologies(f: &Cnf3) -> Cnf3 {
    let mut out = f.clone();
    for v in 1..=f.n {
        if !f.clauses.iter().flatten().any(|l| *l == Lit::pos(v)) {
            out.clauses.push([Lit::pos(v), Lit::neg(v), Lit::neg(v)]);
        }
    }
    out
}

/// The first satisfying assignment in counting order, with variable `i`
/// on bit `i - 1`.
pub fn sat_oracle(f: &Cnf3) -> Result<Option<Vec<bool>>> {
    if f.n > 25 {
        return Err(Error::SizeLimit(format!("{} variables, truth tables stop at 25", f.n)));
    }
    Ok((0u64..1 << f.n)
        .map(|mask| (0..f.n).map(|i| mask >> i & 1 == 1).collect::<Vec<bool>>())
        .find(|a| f.satisfied_by(a)))
}

/// The reduction graph with its vertex roles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionGraph {
    pub graph: Multigraph,
    pub names: Vec<String>,
    pub formula: Cnf3,
}

impl ReductionGraph {
    pub fn n(&self) -> usize {
        self.formula.n
    }

    pub fn m(&self) -> usize {
        self.formula.m()
    }

    pub fn d(&self, k: usize) -> State {
        assert!(k < 8);
        k
    }

    /// `x_i` for i in 1..=n.
    pub fn x(&self, i: usize) -> State {
        8 + 3 * (i - 1)
    }

    pub fn x_bar(&self, i: usize) -> State {
        self.x(i) + 1
    }

    pub fn w(&self, i: usize) -> State {
        self.x(i) + 2
    }

    /// `C_{j,k}` for j in 1..=m, k in 0..5.
    pub fn c(&self, j: usize, k: usize) -> State {
        assert!(k < 5);
        8 + 3 * self.n() + 5 * (j - 1) + k
    }

    pub fn literal_vertex(&self, l: Lit) -> State {
        if l.negated {
            self.x_bar(l.var)
        } else {
            self.x(l.var)
        }
    }

    /// The synchronization target D_4.
    pub fn sink(&self) -> State {
        self.d(4)
    }
}

/// Builds the graph. The formula must have a positive occurrence of
/// every variable; see [`augment_tautologies`].
pub fn build_reduction(f: &Cnf3) -> Result<ReductionGraph> {
    if !f.has_positive_occurrences() {
        return invalid("some variable has no positive occurrence; call augment_tautologies first");
    }
    if f.m() == 0 {
        return invalid("the reduction needs at least one clause");
    }
    let (n, m) = (f.n, f.m());
    let t = 5 * m + 3 * n + 8;
    let mut rg = ReductionGraph {
        graph: Multigraph::new(vec![Vec::new(); t])?,
        names: Vec::with_capacity(t),
        formula: f.clone(),
    };
    let d = |k: usize| k;
    let mut out = vec![Vec::new(); t];
    let c14 = rg.c(1, 4);
    let fixed = [
        [d(3), d(3)],
        [d(4), d(4)],
        [d(2), d(6)],
        [d(2), c14],
        [d(5), d(7)],
        [d(4), d(6)],
        [d(5), d(0)],
        [d(1), d(6)],
    ];
    for (k, e) in fixed.iter().enumerate() {
        out[d(k)] = e.to_vec();
        rg.names.push(format!("D{k}"));
    }
    for i in 1..=n {
        let (x, xb, w) = (rg.x(i), rg.x_bar(i), rg.w(i));
        out[x] = vec![xb, d(4)];
        out[xb] = vec![w, d(4)];
        out[w] = vec![d(4), xb];
        rg.names.extend([format!("x{i}"), format!("~x{i}"), format!("W{i}")]);
    }
    for (idx, clause) in f.clauses.iter().enumerate() {
        let j = idx + 1;
        let c = |k| rg.c(j, k);
        let l = clause.map(|lit| rg.literal_vertex(lit));
        let next = if j < m { rg.c(j + 1, 4) } else { d(6) };
        out[c(0)] = vec![c(1), c(2)];
        out[c(1)] = vec![l[0], l[1]];
        out[c(2)] = vec![l[2], c(3)];
        out[c(3)] = vec![d(4), next];
        out[c(4)] = vec![d(5), c(0)];
        rg.names.extend((0..5).map(|k| format!("C{j},{k}")));
    }
    rg.graph = Multigraph::new(out)?;
    Ok(rg)
}

/// Which satisfied literal a clause routes its `ab` path to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LiteralChoice {
    FirstSatisfied,
    #[default]
    LastSatisfied,
}

/// The coloring of a satisfying assignment, reset by `abaa` into D_4.
pub fn extract_coloring(rg: &ReductionGraph, assignment: &[bool]) -> Result<Coloring> {
    extract_coloring_with(rg, assignment, LiteralChoice::default())
}

pub fn extract_coloring_with(
    rg: &ReductionGraph,
    assignment: &[bool],
    choice: LiteralChoice,
) -> Result<Coloring> {
    if !rg.formula.satisfied_by(assignment) {
        return invalid("the assignment does not satisfy the formula");
    }
    // a_slot[v]: which of v's two slots carries `a`.
    let mut a_slot = vec![0usize; rg.graph.t()];
    for i in 1..=rg.n() {
        let v = if assignment[i - 1] { 1 } else { 0 };
        a_slot[rg.x_bar(i)] = v;
        a_slot[rg.w(i)] = v;
    }
    for (idx, clause) in rg.formula.clauses.iter().enumerate() {
        let j = idx + 1;
        let mut sat = (0..3).filter(|&p| clause[p].holds(assignment));
        let chosen = match choice {
            LiteralChoice::FirstSatisfied => sat.next(),
            LiteralChoice::LastSatisfied => sat.next_back(),
        }
        .expect("clause satisfied");
        // `b` on the slot leading to the chosen literal.
        let (c0, c1, c2) = match chosen {
            0 => (0, 1, 0),
            1 => (0, 0, 0),
            _ => (1, 0, 1),
        };
        a_slot[rg.c(j, 0)] = c0;
        a_slot[rg.c(j, 1)] = c1;
        a_slot[rg.c(j, 2)] = c2;
    }
    Coloring::new(a_slot.iter().map(|&s| if s == 0 { vec![0, 1] } else { vec![1, 0] }).collect())
}

/// The word `abaa`.
pub fn abaa() -> Word {
    vec![0, 1, 0, 0]
}

/// Vertices reached from `v` by walks of exactly `len` edges.
pub fn reach_exactly(g: &Multigraph, v: State, len: usize) -> StateSet {
    let mut cur = StateSet::singleton(g.t(), v);
    for _ in 0..len {
        let mut next = StateSet::empty(g.t());
        for u in cur.iter() {
            for &w in g.out_edges(u) {
                next.insert(w);
            }
        }
        cur = next;
    }
    cur
}

/// Outcome of [`verify_reduction`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionReport {
    pub vertices: usize,
    pub size_ok: bool,
    pub degree_ok: bool,
    pub literal_edges_ok: bool,
    pub strongly_connected: bool,
    /// D_4 is not reachable in exactly 3 steps from D_0 or D_6.
    pub d4_not_3_reachable: bool,
    /// D_4 is the only vertex reachable in exactly 4 steps from every vertex.
    pub d4_only_common_4_target: bool,
    pub satisfiable: bool,
    pub srcp: bool,
    /// Every (canonical word, target) pair of length 4 that some coloring
    /// realises, rendered like `abaa@D4`.
    pub reset_shapes: Vec<String>,
    /// The extracted coloring resets by `abaa` into D_4 (satisfiable only).
    pub witness_ok: Option<bool>,
    /// No coloring that changes the D part resets by `abaa` (satisfiable only).
    pub d_rigid: Option<bool>,
}

impl ReductionReport {
    pub fn equivalent(&self) -> bool {
        self.satisfiable == self.srcp
    }

    pub fn all_hold(&self) -> bool {
        self.size_ok
            && self.degree_ok
            && self.literal_edges_ok
            && self.strongly_connected
            && self.d4_not_3_reachable
            && self.d4_only_common_4_target
            && self.equivalent()
            && self.reset_shapes.iter().all(|s| s == "abaa@D4")
            && self.witness_ok != Some(false)
            && self.d_rigid != Some(false)
    }
}

/// The D-part coloring is forced: flipping any D vertex with two distinct
/// targets leaves no `abaa` coloring into D_4.
pub fn d_part_is_rigid(rg: &ReductionGraph) -> Result<bool> {
    let g = &rg.graph;
    for k in 0..8 {
        let e = g.out_edges(rg.d(k));
        if e[0] == e[1] {
            continue;
        }
        let mut fixed = vec![None; g.t()];
        fixed[rg.d(k)] = Some(vec![1, 0]);
        if find_coloring(g, &abaa(), rg.sink(), &fixed)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Builds the graph for the augmented formula and checks it end to end.
pub fn verify_reduction(f: &Cnf3) -> Result<ReductionReport> {
    let aug = augment_tautologies(f);
    let rg = build_reduction(&aug)?;
    let g = &rg.graph;
    let t = g.t();
    let literal_edges_ok = aug.clauses.iter().enumerate().all(|(idx, c)| {
        let j = idx + 1;
        let l = c.map(|lit| rg.literal_vertex(lit));
        g.out_edges(rg.c(j, 1)) == [l[0], l[1]] && g.out_edges(rg.c(j, 2))[0] == l[2]
    });
    let d4 = rg.sink();
    let common4: Vec<State> =
        (0..t).filter(|&q| (0..t).all(|v| reach_exactly(g, v, 4).contains(q))).collect();
    let satisfiable = sat_oracle(&aug)?.is_some();
    let assignment = sat_oracle(f)?;
    let srcp = srcp_search(g, 4)?.is_some();

    let mut reset_shapes = Vec::new();
    for w in canonical_words(4, 2) {
        for q in 0..t {
            if find_coloring(g, &w, q, &[])?.is_some() {
                let word: String = w.iter().map(|&l| if l == 0 { 'a' } else { 'b' }).collect();
                reset_shapes.push(format!("{word}@{}", rg.names[q]));
            }
        }
    }

    let (witness_ok, d_rigid) = match &assignment {
        Some(a) => {
            let c = extract_coloring(&rg, a)?;
            let dfa = g.apply_coloring(&c)?;
            let img = dfa.apply_word(&StateSet::full(t), &abaa())?;
            let ok = img.len() == 1 && img.contains(d4);
            (Some(ok), Some(d_part_is_rigid(&rg)?))
        }
        None => (None, None),
    };

    Ok(ReductionReport {
        vertices: t,
        size_ok: t == 5 * aug.m() + 3 * aug.n + 8,
        degree_ok: g.out_degree_uniform() == Some(2),
        literal_edges_ok,
        strongly_connected: g.is_strongly_connected(),
        d4_not_3_reachable: [rg.d(0), rg.d(6)].iter().all(|&v| !reach_exactly(g, v, 3).contains(d4)),
        d4_only_common_4_target: common4 == [d4],
        satisfiable,
        srcp,
        reset_shapes,
        witness_ok,
        d_rigid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Cnf3 {
        Cnf3::from_signed(4, &[[1, -2, 3], [1, 2, 4], [-1, -3, 4]]).unwrap()
    }

    #[test]
    fn dimacs_round_trip() {
        let f = sample();
        let text = f.to_dimacs();
        assert_eq!(text.lines().next(), Some("p cnf 4 3"));
        assert_eq!(Cnf3::parse_dimacs(&text).unwrap(), f);
        let commented = "c sample\np cnf 4 3\n1 -2 3 0\n1 2 4 0 -1 -3 4 0\n";
        assert_eq!(Cnf3::parse_dimacs(commented).unwrap(), f);
        assert!(Cnf3::parse_dimacs("p cnf 2 1\n1 2 0\n").is_err());
        assert!(Cnf3::parse_dimacs("p cnf 2 1\n1 2 3 0\n").is_err());
    }

    #[test]
    fn augmentation() {
        let f = sample();
        assert_eq!(augment_tautologies(&f), f);
        let neg = Cnf3::from_signed(1, &[[-1, -1, -1]]).unwrap();
        let aug = augment_tautologies(&neg);
        assert_eq!(aug.clauses.len(), 2);
        assert_eq!(aug.clauses[1], [Lit::pos(1), Lit::neg(1), Lit::neg(1)]);
        assert!(build_reduction(&neg).is_err());
    }

    #[test]
    fn oracle_basics() {
        assert_eq!(sat_oracle(&Cnf3::new(2, vec![]).unwrap()).unwrap(), Some(vec![false, false]));
        let contra = Cnf3::from_signed(1, &[[1, 1, 1], [-1, -1, -1]]).unwrap();
        assert_eq!(sat_oracle(&contra).unwrap(), None);
        assert!(matches!(sat_oracle(&Cnf3::new(26, vec![]).unwrap()), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn sample_shape_and_witness() {
        let rg = build_reduction(&sample()).unwrap();
        assert_eq!(rg.graph.t(), 35);
        assert!(rg.graph.is_strongly_connected());
        let assignment = [true, false, false, true];
        let c = extract_coloring(&rg, &assignment).unwrap();
        let a = rg.graph.apply_coloring(&c).unwrap();
        let img = a.apply_word(&StateSet::full(35), &abaa()).unwrap();
        assert_eq!(img, StateSet::singleton(35, rg.sink()));
        assert!(extract_coloring(&rg, &[false, false, false, false]).is_err());
    }
}
