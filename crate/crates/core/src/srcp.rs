//! Synchronizing road coloring with a bound on the reset word length.
//!
//! Three deciders live here. [`srcp_oracle`] is plain exhaustive search
//! over colorings and serves as ground truth. [`srcp_search`] is an exact
//! backtracking search that scales to the reduction graphs. [`srcp_decide`]
//! is the front door, with the Pin-bound shortcut.

use std::collections::HashSet;

use crate::automaton::Dfa;
use crate::error::{invalid, Error, Result};
use crate::graph::{unrank_permutation, Coloring, Multigraph};
use crate::sync::{is_synchronizing, pin_bound, shortest_reset_word, syn_decide};
use crate::{Letter, State, Word};

/// Default cap on the number of colorings the oracle may visit.
pub const DEFAULT_MAX_COLORINGS: u128 = 1 << 24;

/// First coloring in enumeration order admitting a reset word of length at
/// most `k`, together with its shortest reset word.
pub fn srcp_oracle(g: &Multigraph, k: usize) -> Result<Option<(Coloring, Word)>> {
    srcp_oracle_with(g, k, DEFAULT_MAX_COLORINGS, 1)
}

/// [`srcp_oracle`] with an explicit coloring cap and worker count.
///
/// Workers split the index range; the witness with the smallest index wins,
/// so the answer does not depend on `threads`.
pub fn srcp_oracle_with(
    g: &Multigraph,
    k: usize,
    max_colorings: u128,
    threads: usize,
) -> Result<Option<(Coloring, Word)>> {
    let d = g.out_degree_uniform().ok_or_else(|| Error::Invalid("out-degree is not uniform".into()))?;
    if d == 0 {
        return Ok((g.t() == 1).then(|| (Coloring::identity(1, 0), Vec::new())));
    }
    let total = g
        .coloring_count()
        .filter(|&n| n <= max_colorings)
        .ok_or_else(|| Error::SizeLimit(format!("more than {max_colorings} colorings to enumerate")))?;
    let table = ColoringTable::new(g, d);
    let search = |lo: u128, hi: u128| -> Option<u128> {
        let mut cols = vec![vec![0; g.t()]; d];
        (lo..hi).find(|&i| {
            table.columns(i, &mut cols);
            resets_within(&cols, k)
        })
    };
    let threads = threads.max(1) as u128;
    let found = if threads == 1 || total < 1024 {
        search(0, total)
    } else {
        let chunk = total.div_ceil(threads);
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|w| {
                    let search = &search;
                    scope.spawn(move || search(w * chunk, ((w + 1) * chunk).min(total)))
                })
                .collect();
            handles.into_iter().filter_map(|h| h.join().expect("worker panicked")).min()
        })
    };
    Ok(found.map(|i| {
        let c = g.coloring_at(i).expect("index in range");
        let a = g.apply_coloring(&c).expect("uniform degree");
        let w = shortest_reset_word(&a, Some(k)).expect("found by the search");
        (c, w)
    }))
}

/// Decodes enumeration indices into letter columns without building
/// colorings.
pub(crate) struct ColoringTable<'a> {
    g: &'a Multigraph,
    d: usize,
    per: u128,
    /// `letter_slot` of every permutation rank, when d! is small.
    perms: Option<Vec<Vec<usize>>>,
}

impl<'a> ColoringTable<'a> {
    pub(crate) fn new(g: &'a Multigraph, d: usize) -> Self {
        let per: u128 = (1..=d as u128).product();
        let perms = (per <= 5040).then(|| (0..per).map(|r| letter_slots(r, d)).collect());
        ColoringTable { g, d, per, perms }
    }

    /// `cols[l][v]` becomes the target of v's l-edge under coloring `index`.
    pub(crate) fn columns(&self, mut index: u128, cols: &mut [Vec<State>]) {
        for v in (0..self.g.t()).rev() {
            let r = index % self.per;
            index /= self.per;
            let out = self.g.out_edges(v);
            match &self.perms {
                Some(p) => {
                    for (l, col) in cols.iter_mut().enumerate() {
                        col[v] = out[p[r as usize][l]];
                    }
                }
                None => {
                    for (l, &s) in letter_slots(r, self.d).iter().enumerate() {
                        cols[l][v] = out[s];
                    }
                }
            }
        }
    }
}

fn letter_slots(rank: u128, d: usize) -> Vec<usize> {
    let slot_letter = unrank_permutation(rank, d);
    let mut inv = vec![0; d];
    for (s, &l) in slot_letter.iter().enumerate() {
        inv[l] = s;
    }
    inv
}

fn mask_image(cols: &[Vec<State>], l: Letter, mask: u64) -> u64 {
    let col = &cols[l];
    let mut img = 0u64;
    let mut rest = mask;
    while rest != 0 {
        let s = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        img |= 1 << col[s];
    }
    img
}

/// Image of the full state set under `w`, as a bit mask (t <= 64).
pub(crate) fn full_image_mask(cols: &[Vec<State>], w: &[Letter]) -> u64 {
    let t = cols[0].len();
    let full = if t == 64 { u64::MAX } else { (1u64 << t) - 1 };
    w.iter().fold(full, |m, &l| mask_image(cols, l, m))
}

/// Does the automaton given by its letter columns have a reset word of
/// length at most `k`?
pub(crate) fn resets_within(cols: &[Vec<State>], k: usize) -> bool {
    let t = cols[0].len();
    let d = cols.len();
    if t == 1 {
        return true;
    }
    let as_dfa = || Dfa::from_fn(t, d, |s, l| cols[l][s]).expect("columns in range");
    if k as u64 >= pin_bound(t as u64) {
        return is_synchronizing(&as_dfa());
    }
    if t > 64 {
        return syn_decide(&as_dfa(), k);
    }
    let full = if t == 64 { u64::MAX } else { (1u64 << t) - 1 };
    let small_tree = (d as f64).powi(k.min(64) as i32) <= 4096.0;
    if small_tree {
        fn dfs(cols: &[Vec<State>], mask: u64, left: usize) -> bool {
            mask.count_ones() == 1
                || (left > 0 && (0..cols.len()).any(|l| dfs(cols, mask_image(cols, l, mask), left - 1)))
        }
        return dfs(cols, full, k);
    }
    let mut seen = HashSet::from([full]);
    let mut layer = vec![full];
    for _ in 0..k {
        let mut next = Vec::new();
        for &m in &layer {
            for l in 0..d {
                let img = mask_image(cols, l, m);
                if img.count_ones() == 1 {
                    return true;
                }
                if seen.insert(img) {
                    next.push(img);
                }
            }
        }
        if next.is_empty() {
            return false;
        }
        layer = next;
    }
    false
}

/// A witness found by [`srcp_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchWitness {
    pub coloring: Coloring,
    pub word: Word,
    pub target: State,
}

/// Words of length `len` over `d` letters, up to renaming letters: each new
/// letter is the smallest unused one. In lexicographic order.
pub fn canonical_words(len: usize, d: usize) -> Vec<Word> {
    fn rec(len: usize, d: usize, cur: &mut Word, used: usize, out: &mut Vec<Word>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for l in 0..(used + 1).min(d) {
            cur.push(l);
            rec(len, d, cur, used.max(l + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, d, &mut Vec::new(), 0, &mut out);
    out
}

const FREE: usize = usize::MAX;

/// Backtracking over partial colorings for one fixed word and target.
///
/// Vertices are walked one by one along the word; a letter is bound to a
/// slot only when a walk first needs it. Slots with equal targets are
/// interchangeable, so only one of them is tried.
struct Walker<'a> {
    g: &'a Multigraph,
    word: &'a [Letter],
    target: State,
    letter_slot: Vec<Vec<usize>>,
    slot_used: Vec<Vec<bool>>,
    trail: Vec<(State, Letter)>,
}

impl<'a> Walker<'a> {
    fn new(g: &'a Multigraph, word: &'a [Letter], target: State, fixed: &[Option<Vec<usize>>]) -> Self {
        let d = g.out_degree_uniform().unwrap_or(0);
        let mut letter_slot = vec![vec![FREE; d]; g.t()];
        let mut slot_used = vec![vec![false; d]; g.t()];
        for (v, f) in fixed.iter().enumerate() {
            if let Some(slots) = f {
                for (l, &s) in slots.iter().enumerate() {
                    letter_slot[v][l] = s;
                    slot_used[v][s] = true;
                }
            }
        }
        Walker { g, word, target, letter_slot, slot_used, trail: Vec::new() }
    }

    fn vertices_from(&mut self, v: State) -> bool {
        if v == self.g.t() {
            return true;
        }
        self.walk(v, v, 0)
    }

    fn walk(&mut self, start: State, at: State, pos: usize) -> bool {
        if pos == self.word.len() {
            return at == self.target && self.vertices_from(start + 1);
        }
        let l = self.word[pos];
        let bound = self.letter_slot[at][l];
        if bound != FREE {
            let next = self.g.out_edges(at)[bound];
            return self.walk(start, next, pos + 1);
        }
        let slots = self.g.out_edges(at);
        for s in 0..slots.len() {
            if self.slot_used[at][s] {
                continue;
            }
            let dup = (0..s).any(|p| !self.slot_used[at][p] && slots[p] == slots[s]);
            if dup {
                continue;
            }
            self.letter_slot[at][l] = s;
            self.slot_used[at][s] = true;
            self.trail.push((at, l));
            let mark = self.trail.len();
            if self.walk(start, slots[s], pos + 1) {
                return true;
            }
            while self.trail.len() >= mark {
                let (v, ll) = self.trail.pop().unwrap();
                let ss = self.letter_slot[v][ll];
                self.slot_used[v][ss] = false;
                self.letter_slot[v][ll] = FREE;
            }
        }
        false
    }

    fn coloring(&self) -> Coloring {
        let d = self.letter_slot.first().map_or(0, Vec::len);
        let slot_letter = self
            .letter_slot
            .iter()
            .zip(&self.slot_used)
            .map(|(ls, used)| {
                let mut row = vec![FREE; d];
                for (l, &s) in ls.iter().enumerate() {
                    if s != FREE {
                        row[s] = l;
                    }
                }
                let mut free_slots = (0..d).filter(|&s| !used[s]);
                for (l, &s) in ls.iter().enumerate() {
                    if s == FREE {
                        row[free_slots.next().unwrap()] = l;
                    }
                }
                row
            })
            .collect();
        Coloring::new(slot_letter).expect("completed coloring is a bijection")
    }
}

/// Exact search for one word and target, with optional per-vertex
/// pre-fixed colorings (`fixed[v][letter] = slot`).
pub fn find_coloring(
    g: &Multigraph,
    word: &[Letter],
    target: State,
    fixed: &[Option<Vec<usize>>],
) -> Result<Option<Coloring>> {
    let d = g.out_degree_uniform().ok_or_else(|| Error::Invalid("out-degree is not uniform".into()))?;
    if word.iter().any(|&l| l >= d) {
        return invalid("word uses letters beyond the out-degree");
    }
    if !fixed.is_empty() && fixed.len() != g.t() {
        return invalid("fixed colorings must cover every vertex");
    }
    let mut w = Walker::new(g, word, target, fixed);
    Ok(w.vertices_from(0).then(|| w.coloring()))
}

/// Exact decision by backtracking: tries canonical words of length
/// `0..=k` in increasing length, and every target.
///
/// Renaming letters maps colorings to colorings, so canonical words
/// suffice. The witness word is a shortest one.
pub fn srcp_search(g: &Multigraph, k: usize) -> Result<Option<SearchWitness>> {
    let d = g.out_degree_uniform().ok_or_else(|| Error::Invalid("out-degree is not uniform".into()))?;
    if g.t() == 1 {
        return Ok(Some(SearchWitness { coloring: Coloring::identity(1, d), word: Vec::new(), target: 0 }));
    }
    if d == 0 {
        return Ok(None);
    }
    for len in 1..=k {
        for word in canonical_words(len, d) {
            for q in 0..g.t() {
                if let Some(c) = find_coloring(g, &word, q, &[])? {
                    return Ok(Some(SearchWitness { coloring: c, word, target: q }));
                }
            }
        }
    }
    Ok(None)
}

/// Decides SRCP on an admissible graph.
///
/// From `k >= z(t)` on, the answer is road colorability, because a
/// synchronizing coloring always has a reset word within the Pin bound.
/// Below that, out-degree 2 with `k = 3` uses the polynomial fixed-word
/// deciders and everything else uses [`srcp_search`].
pub fn srcp_decide(g: &Multigraph, k: usize) -> Result<bool> {
    if !g.is_admissible() {
        return invalid("SRCP needs an admissible graph (uniform out-degree, aperiodic)");
    }
    let t = g.t();
    if k as u64 >= pin_bound(t as u64) {
        return Ok(g.is_road_colorable());
    }
    if g.out_degree_uniform() == Some(2) && k == 3 {
        return crate::srcpw::k3_membership(g);
    }
    Ok(srcp_search(g, k)?.is_some())
}

/// Output of [`kernelize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    pub graph: Multigraph,
    pub k: usize,
    /// `Some(answer)` when `k >= z(t)` resolved the instance and `graph`
    /// is a fixed trivial instance with that answer.
    pub resolved: Option<bool>,
    /// Whether the reduced graph is still aperiodic. Edge deletion can
    /// break it; equivalence does not depend on it.
    pub aperiodicity_preserved: bool,
}

/// Polynomial kernel in the number of states.
///
/// While the out-degree exceeds `t * (z(t) - 1)`, every vertex loses one
/// edge from a largest multiedge (smallest target on ties). A reset word
/// shorter than z(t) uses fewer than z(t) letters, so only multiedges with
/// more than z(t) - 1 parallel edges are ever cut.
pub fn kernelize(g: &Multigraph, k: usize) -> Result<Kernel> {
    if !g.is_admissible() {
        return invalid("kernelize needs an admissible graph");
    }
    let t = g.t();
    let d = g.out_degree_uniform().expect("admissible");
    let z = pin_bound(t as u64) as usize;
    if k >= z {
        let yes = g.is_road_colorable();
        let graph = if yes {
            Multigraph::new(vec![vec![0; d]])?
        } else {
            Multigraph::new(vec![vec![0; d], vec![1; d]])?
        };
        return Ok(Kernel { graph, k: 0, resolved: Some(yes), aperiodicity_preserved: true });
    }
    let threshold = t * (z - 1);
    let mut out: Vec<Vec<State>> = g.adjacency().to_vec();
    let mut degree = d;
    while degree > threshold {
        for slots in out.iter_mut() {
            let mut mult = vec![0usize; t];
            for &w in slots.iter() {
                mult[w] += 1;
            }
            let best = (0..t).max_by_key(|&w| (mult[w], std::cmp::Reverse(w))).unwrap();
            let pos = slots.iter().rposition(|&w| w == best).unwrap();
            slots.remove(pos);
        }
        degree -= 1;
    }
    let graph = Multigraph::new(out)?;
    let aperiodicity_preserved = degree == 0 || graph.is_aperiodic().unwrap_or(false);
    Ok(Kernel { graph, k, resolved: None, aperiodicity_preserved })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(out: Vec<Vec<usize>>) -> Multigraph {
        Multigraph::new(out).unwrap()
    }

    #[test]
    fn oracle_trivial_cases() {
        let (c, w) = srcp_oracle(&g(vec![vec![0, 0]]), 0).unwrap().unwrap();
        assert_eq!(c, Coloring::identity(1, 2));
        assert!(w.is_empty());
        let cycle = g(vec![vec![1, 1], vec![0, 0]]);
        for k in 0..5 {
            assert!(srcp_oracle(&cycle, k).unwrap().is_none());
            assert!(srcp_search(&cycle, k).unwrap().is_none());
        }
    }

    #[test]
    fn oracle_respects_cap() {
        let big = g(vec![vec![0, 0]; 30]);
        assert!(matches!(srcp_oracle(&big, 2), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn canonical_word_counts() {
        // Bell-like counts: restricted growth strings.
        assert_eq!(canonical_words(3, 2).len(), 4);
        assert_eq!(canonical_words(3, 3).len(), 5);
        assert_eq!(canonical_words(4, 2).len(), 8);
        assert_eq!(canonical_words(0, 2), vec![Vec::<Letter>::new()]);
    }

    #[test]
    fn decide_validates_and_shortcuts() {
        assert!(srcp_decide(&g(vec![vec![1, 1], vec![0, 0]]), 3).is_err());
        let h = g(vec![vec![0, 1], vec![0, 0]]);
        assert!(srcp_decide(&h, pin_bound(2) as usize).unwrap());
        assert!(!srcp_decide(&g(vec![vec![0, 0], vec![1, 1]]), 1).unwrap());
    }

    #[test]
    fn kernel_unchanged_below_threshold() {
        // t = 3: threshold 9.
        let h = g(vec![vec![0, 1, 2], vec![0, 0, 1], vec![2, 1, 0]]);
        let kern = kernelize(&h, 2).unwrap();
        assert_eq!(kern.graph, h);
        assert_eq!(kern.resolved, None);
    }

    #[test]
    fn kernel_trivial_branch_for_two_states() {
        // z(2) = 1, so every k >= 1 is resolved on the spot.
        let h = g(vec![vec![0, 1], vec![0, 0]]);
        let kern = kernelize(&h, 1).unwrap();
        assert_eq!(kern.resolved, Some(true));
        assert_eq!(kern.graph, g(vec![vec![0, 0]]));
        assert_eq!(kern.k, 0);
    }

    #[test]
    fn kernel_cuts_largest_multiedge_first() {
        let row = |a: usize, b: usize, c: usize| {
            let mut r = vec![0; a];
            r.extend(vec![1; b]);
            r.extend(vec![2; c]);
            r
        };
        let h = g(vec![row(6, 6, 0), row(12, 0, 0), row(1, 6, 5)]);
        let kern = kernelize(&h, 3).unwrap();
        assert_eq!(kern.graph.out_degree_uniform(), Some(9));
        let count = |v: usize, w: usize| kern.graph.out_edges(v).iter().filter(|&&x| x == w).count();
        assert_eq!((count(0, 0), count(0, 1)), (4, 5));
        assert_eq!(count(1, 0), 9);
        assert_eq!((count(2, 0), count(2, 1), count(2, 2)), (1, 4, 4));
    }
}
