//! Fixed reset words of length three over two letters.
//!
//! For out-degree 2, a coloring with a reset word of length at most 3 has
//! one of length exactly 3, and up to renaming the letters that word is
//! `aaa`, `aab`, `aba` or `abb`. Each class gets a polynomial decider; the
//! union of the four decides SRCP at `k = 3`.

use std::fmt;
use std::str::FromStr;

use crate::automaton::StateSet;
use crate::error::{invalid, Error, Result};
use crate::graph::{Coloring, Multigraph};
use crate::srcp::{full_image_mask, ColoringTable};
use crate::{Letter, State};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FixedWordClass {
    Aaa,
    Aab,
    Aba,
    Abb,
}

impl FixedWordClass {
    pub const ALL: [FixedWordClass; 4] =
        [FixedWordClass::Aaa, FixedWordClass::Aab, FixedWordClass::Aba, FixedWordClass::Abb];

    pub fn word(self) -> [Letter; 3] {
        match self {
            FixedWordClass::Aaa => [0, 0, 0],
            FixedWordClass::Aab => [0, 0, 1],
            FixedWordClass::Aba => [0, 1, 0],
            FixedWordClass::Abb => [0, 1, 1],
        }
    }
}

impl fmt::Display for FixedWordClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.word().iter().map(|&l| if l == 0 { 'a' } else { 'b' }).collect();
        f.write_str(&s)
    }
}

/// Accepts any length-3 word over `a`, `b`; a leading `b` is swapped to `a`.
impl FromStr for FixedWordClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.trim().chars().collect();
        if chars.len() != 3 || chars.iter().any(|c| !matches!(c, 'a' | 'b')) {
            return invalid(format!("`{s}` is not a length-3 word over a, b"));
        }
        let same = |i: usize| chars[i] == chars[0];
        Ok(match (same(1), same(2)) {
            (true, true) => FixedWordClass::Aaa,
            (true, false) => FixedWordClass::Aab,
            (false, true) => FixedWordClass::Aba,
            (false, false) => FixedWordClass::Abb,
        })
    }
}

fn require_degree_two(g: &Multigraph) -> Result<()> {
    if g.t() == 0 || g.out_degree_uniform() != Some(2) {
        return invalid("fixed-word deciders need out-degree 2");
    }
    Ok(())
}

/// Brute force: the first coloring (in enumeration order) under which `w`
/// collapses every vertex to one.
pub fn in_class_oracle(g: &Multigraph, w: &[Letter]) -> Result<Option<Coloring>> {
    require_degree_two(g)?;
    if w.iter().any(|&l| l >= 2) {
        return invalid("word uses letters beyond a, b");
    }
    if g.t() > 64 {
        for c in g.enumerate_colorings()? {
            if g.apply_coloring(&c)?.is_reset_word(w)? {
                return Ok(Some(c));
            }
        }
        return Ok(None);
    }
    let total = g.coloring_count().ok_or_else(|| Error::SizeLimit("coloring count overflows".into()))?;
    let table = ColoringTable::new(g, 2);
    let mut cols = vec![vec![0; g.t()]; 2];
    let found = (0..total).find(|&i| {
        table.columns(i, &mut cols);
        full_image_mask(&cols, w).count_ones() == 1
    });
    Ok(found.map(|i| g.coloring_at(i).expect("index in range")))
}

/// Builds a coloring from the slot carrying letter `a` at each vertex.
fn coloring_from_a_slots(a_slot: &[usize]) -> Coloring {
    Coloring::new(a_slot.iter().map(|&s| if s == 0 { vec![0, 1] } else { vec![1, 0] }).collect())
        .expect("two-slot permutation")
}

/// Letter `a` follows a shortest path into `targets`; vertices inside keep
/// the slot given by `inside`.
fn descend(g: &Multigraph, dist: &[Option<usize>], inside: impl Fn(State) -> usize) -> Vec<usize> {
    (0..g.t())
        .map(|v| match dist[v] {
            Some(0) => inside(v),
            Some(d) => (0..2).find(|&s| dist[g.out_edges(v)[s]] == Some(d - 1)).unwrap(),
            None => 0,
        })
        .collect()
}

fn loop_slot(g: &Multigraph, q: State) -> Option<usize> {
    g.out_edges(q).iter().position(|&w| w == q)
}

fn aaa_coloring(g: &Multigraph) -> Option<Coloring> {
    // `aaa` forces a self-loop at the sink: a^3(q) = q and a^3(a(q)) = q.
    (0..g.t()).find_map(|q| {
        let l = loop_slot(g, q)?;
        let dist = g.distance_layers(q);
        dist.iter()
            .all(|d| d.is_some_and(|d| d <= 3))
            .then(|| coloring_from_a_slots(&descend(g, &dist, |_| l)))
    })
}

fn in_neighbours(g: &Multigraph, q: State) -> Vec<bool> {
    (0..g.t()).map(|v| g.out_edges(v).contains(&q)).collect()
}

/// The slot of `u` not used for the edge to `q` (slot 0 if both go to q).
fn other_slot(g: &Multigraph, u: State, q: State) -> usize {
    if g.out_edges(u)[0] == q {
        1
    } else {
        0
    }
}

fn aab_coloring(g: &Multigraph) -> Option<Coloring> {
    // After `aa` every vertex sits in a set X of in-neighbours of q whose
    // `a`-edges avoid q and stay in X. Take the largest such X.
    (0..g.t()).find_map(|q| {
        let mut x = in_neighbours(g, q);
        loop {
            let drop: Vec<State> =
                (0..g.t()).filter(|&u| x[u] && !x[g.out_edges(u)[other_slot(g, u, q)]]).collect();
            if drop.is_empty() {
                break;
            }
            for u in drop {
                x[u] = false;
            }
        }
        let members: Vec<State> = (0..g.t()).filter(|&u| x[u]).collect();
        if members.is_empty() {
            return None;
        }
        let dist = g.distances_to_set(&members);
        dist.iter()
            .all(|d| d.is_some_and(|d| d <= 2))
            .then(|| coloring_from_a_slots(&descend(g, &dist, |u| other_slot(g, u, q))))
    })
}

#[derive(Clone, Copy)]
enum Cond {
    Const(bool),
    Lit(usize),
}

/// 2-SAT over literals `2 * var + value`; `None` when unsatisfiable.
fn solve_2sat(vars: usize, clauses: &[(usize, usize)]) -> Option<Vec<bool>> {
    let mut out = vec![Vec::new(); 2 * vars];
    for &(x, y) in clauses {
        out[x ^ 1].push(y);
        out[y ^ 1].push(x);
    }
    let comps = Multigraph::new(out).expect("literal indices in range").sccs();
    let mut comp_of = vec![0; 2 * vars];
    for (i, c) in comps.iter().enumerate() {
        for &lit in c {
            comp_of[lit] = i;
        }
    }
    // Components come sinks first, so the earlier of a literal and its
    // negation is the one to make true.
    (0..vars)
        .map(|v| {
            let (f, t) = (comp_of[2 * v], comp_of[2 * v + 1]);
            (f != t).then_some(t < f)
        })
        .collect()
}

fn aba_coloring(g: &Multigraph) -> Option<Coloring> {
    // Only loopless sinks: a loop at q already puts g in the aaa class.
    // Vertices of P (the in-neighbours of q) take `a` into q; for the rest
    // a boolean c(w) says which slot carries `a`, and every `a`-target must
    // send `b` into P.
    let t = g.t();
    (0..t).find_map(|q| {
        if loop_slot(g, q).is_some() {
            return None;
        }
        let p = in_neighbours(g, q);
        let mut var = vec![usize::MAX; t];
        let mut free = Vec::new();
        for w in (0..t).filter(|&w| !p[w]) {
            var[w] = free.len();
            free.push(w);
        }
        let enters = |u: State, s: usize| p[g.out_edges(u)[s]];
        let b_into_p = |u: State| -> Cond {
            if p[u] {
                return Cond::Const(enters(u, other_slot(g, u, q)));
            }
            match (enters(u, 0), enters(u, 1)) {
                (true, true) => Cond::Const(true),
                (false, false) => Cond::Const(false),
                // `a` on slot 0 leaves `b` on slot 1.
                (false, true) => Cond::Lit(2 * var[u]),
                (true, false) => Cond::Lit(2 * var[u] + 1),
            }
        };
        let mut clauses = Vec::new();
        let mut need = |premise: Option<usize>, c: Cond| -> bool {
            match (premise, c) {
                (_, Cond::Const(true)) => true,
                (None, Cond::Const(false)) => false,
                (Some(a), Cond::Const(false)) => {
                    clauses.push((a ^ 1, a ^ 1));
                    true
                }
                (None, Cond::Lit(l)) => {
                    clauses.push((l, l));
                    true
                }
                (Some(a), Cond::Lit(l)) => {
                    clauses.push((a ^ 1, l));
                    true
                }
            }
        };
        // P is nonempty whenever q has an in-edge, and then q = a(P) is an
        // `a`-target itself.
        if !p.iter().any(|&x| x) || !need(None, b_into_p(q)) {
            return None;
        }
        for &w in &free {
            for s in 0..2 {
                if !need(Some(2 * var[w] + s), b_into_p(g.out_edges(w)[s])) {
                    return None;
                }
            }
        }
        let assignment = solve_2sat(free.len(), &clauses)?;
        let a_slot: Vec<usize> = (0..t)
            .map(|v| if p[v] { 1 - other_slot(g, v, q) } else { assignment[var[v]] as usize })
            .collect();
        Some(coloring_from_a_slots(&a_slot))
    })
}

/// Sinks q such that every vertex has an edge into V₂(q), the vertices at
/// distance exactly 2 from q.
fn v2_sink(g: &Multigraph) -> Option<(State, Vec<bool>)> {
    (0..g.t()).find_map(|q| {
        let in_v2: Vec<bool> = g.distance_layers(q).iter().map(|&d| d == Some(2)).collect();
        (0..g.t()).all(|v| g.out_edges(v).iter().any(|&w| in_v2[w])).then_some((q, in_v2))
    })
}

/// Membership in the `aaa` class.
pub fn decide_aaa(g: &Multigraph) -> Result<bool> {
    require_degree_two(g)?;
    Ok(aaa_coloring(g).is_some())
}

/// Membership in the `aab` class minus the `aaa` class.
pub fn decide_aab(g: &Multigraph) -> Result<bool> {
    Ok(!decide_aaa(g)? && aab_coloring(g).is_some())
}

/// Membership in the `aba` class minus the `aaa` class.
pub fn decide_aba(g: &Multigraph) -> Result<bool> {
    Ok(!decide_aaa(g)? && aba_coloring(g).is_some())
}

/// Membership in the `abb` class minus the `aba` and `aaa` classes: outside
/// both, and some q has V₂(q) reachable in one step from every vertex.
pub fn decide_abb(g: &Multigraph) -> Result<bool> {
    Ok(!decide_aaa(g)? && aba_coloring(g).is_none() && v2_sink(g).is_some())
}

/// The `abb` coloring built from the V₂ condition: edges into V₂(q) get
/// `a` (the lower slot when both qualify), the rest get `b`.
pub fn abb_coloring(g: &Multigraph) -> Result<Option<Coloring>> {
    require_degree_two(g)?;
    Ok(v2_sink(g).map(|(_, in_v2)| {
        let a_slot: Vec<usize> =
            (0..g.t()).map(|v| (0..2).find(|&s| in_v2[g.out_edges(v)[s]]).unwrap()).collect();
        coloring_from_a_slots(&a_slot)
    }))
}

/// Decides the class in the shape used by the k = 3 algorithm (`aaa`, then
/// each later class minus the earlier ones) and returns a coloring under
/// which the class word resets the graph.
pub fn decide_with_witness(g: &Multigraph, class: FixedWordClass) -> Result<Option<Coloring>> {
    require_degree_two(g)?;
    if class == FixedWordClass::Aaa {
        return Ok(aaa_coloring(g));
    }
    if aaa_coloring(g).is_some() {
        return Ok(None);
    }
    Ok(match class {
        FixedWordClass::Aaa => unreachable!(),
        FixedWordClass::Aab => aab_coloring(g),
        FixedWordClass::Aba => aba_coloring(g),
        FixedWordClass::Abb => {
            if aba_coloring(g).is_some() {
                None
            } else {
                abb_coloring(g)?
            }
        }
    })
}

pub fn decide(g: &Multigraph, class: FixedWordClass) -> Result<bool> {
    Ok(decide_with_witness(g, class)?.is_some())
}

/// Swaps the two colors at every vertex whose `b`-edge enters q, turning an
/// `abb` synchronization with `q ∈ δ(Q, a)` into an `aba` one.
pub fn recolor_abb_to_aba(g: &Multigraph, c: &Coloring) -> Result<Coloring> {
    require_degree_two(g)?;
    let a = g.apply_coloring(c)?;
    let img = a.apply_word(&StateSet::full(g.t()), &FixedWordClass::Abb.word())?;
    if img.len() != 1 {
        return invalid("precondition violated: the coloring does not synchronize by abb");
    }
    let q = img.iter().next().unwrap();
    if !(0..g.t()).any(|s| a.step(s, 0) == q) {
        return invalid("precondition violated: q is not in δ(Q, a)");
    }
    if decide_aaa(g)? {
        return invalid("precondition violated: the graph lies in the aaa class");
    }
    let mut out = c.clone();
    for s in 0..g.t() {
        if a.step(s, 1) == q {
            out.swap_at(s, 0, 1);
        }
    }
    Ok(out)
}

/// The union of the four classes, without the admissibility check.
pub fn k3_membership(g: &Multigraph) -> Result<bool> {
    require_degree_two(g)?;
    Ok(aaa_coloring(g).is_some()
        || aab_coloring(g).is_some()
        || aba_coloring(g).is_some()
        || v2_sink(g).is_some())
}

/// A coloring with a reset word of length at most 3, from whichever class
/// applies first.
pub fn k3_witness(g: &Multigraph) -> Result<Option<(Coloring, FixedWordClass)>> {
    for class in FixedWordClass::ALL {
        if let Some(c) = decide_with_witness(g, class)? {
            return Ok(Some((c, class)));
        }
    }
    Ok(None)
}

/// SRCP for out-degree 2 and k = 3 in polynomial time.
pub fn srcp_k3_decide(g: &Multigraph) -> Result<bool> {
    if !g.is_admissible() {
        return invalid("SRCP needs an admissible graph (uniform out-degree, aperiodic)");
    }
    k3_membership(g)
}
