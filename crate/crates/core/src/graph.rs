//! Directed multigraphs with ordered out-edge slots, and their colorings.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::automaton::{parse_rows, Dfa};
use crate::error::{invalid, Error, Result};
use crate::letters::{parse_word, render_letter};
use crate::text::{content_lines, parse_header};
use crate::{Letter, State};

/// Vertices `0..t`; `out[v]` lists the targets of v's out-edge slots.
///
/// Parallel edges are repeated slots and are never merged: a coloring
/// tells them apart and the kernel deletes them one at a time.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multigraph {
    out: Vec<Vec<State>>,
}

impl Multigraph {
    pub fn new(out: Vec<Vec<State>>) -> Result<Self> {
        let t = out.len();
        for (v, slots) in out.iter().enumerate() {
            if let Some(&bad) = slots.iter().find(|&&w| w >= t) {
                return invalid(format!("edge {v} -> {bad} leaves 0..{t}"));
            }
        }
        Ok(Multigraph { out })
    }

    pub fn t(&self) -> usize {
        self.out.len()
    }

    pub fn out_edges(&self, v: State) -> &[State] {
        &self.out[v]
    }

    pub fn adjacency(&self) -> &[Vec<State>] {
        &self.out
    }

    /// `Some(d)` when every vertex has exactly d out-edges.
    pub fn out_degree_uniform(&self) -> Option<usize> {
        let d = self.out.first().map_or(0, Vec::len);
        self.out.iter().all(|s| s.len() == d).then_some(d)
    }

    fn degree_or_err(&self) -> Result<usize> {
        self.out_degree_uniform().ok_or_else(|| Error::Invalid("out-degree is not uniform".into()))
    }

    /// Strongly connected components in reverse topological order
    /// (every edge leaving a component points to an earlier one).
    pub fn sccs(&self) -> Vec<Vec<State>> {
        // Iterative Tarjan.
        let t = self.t();
        let mut index = vec![usize::MAX; t];
        let mut low = vec![0; t];
        let mut on_stack = vec![false; t];
        let mut stack = Vec::new();
        let mut comps = Vec::new();
        let mut next = 0;
        for root in 0..t {
            if index[root] != usize::MAX {
                continue;
            }
            let mut call: Vec<(State, usize)> = vec![(root, 0)];
            index[root] = next;
            low[root] = next;
            next += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&(v, i)) = call.last() {
                if i < self.out[v].len() {
                    let w = self.out[v][i];
                    call.last_mut().unwrap().1 += 1;
                    if index[w] == usize::MAX {
                        index[w] = next;
                        low[w] = next;
                        next += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps.push(comp);
                    }
                }
            }
        }
        comps
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.t() > 0 && self.sccs().len() == 1
    }

    /// Gcd of cycle lengths inside one component, or `None` if it has no cycle.
    fn component_period(&self, comp: &[State], comp_of: &[usize]) -> Option<u64> {
        let id = comp_of[comp[0]];
        let mut level = vec![u64::MAX; self.t()];
        level[comp[0]] = 0;
        let mut queue = VecDeque::from([comp[0]]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.out[u] {
                if comp_of[v] == id && level[v] == u64::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        let mut g = 0u64;
        let mut has_cycle = false;
        for &u in comp {
            for &v in &self.out[u] {
                if comp_of[v] == id {
                    has_cycle = true;
                    g = gcd(g, (level[u] + 1).abs_diff(level[v]));
                }
            }
        }
        has_cycle.then_some(g)
    }

    fn component_index(&self, comps: &[Vec<State>]) -> Vec<usize> {
        let mut comp_of = vec![0; self.t()];
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                comp_of[v] = i;
            }
        }
        comp_of
    }

    /// Whether the gcd of all cycle lengths is 1.
    ///
    /// Per component, BFS levels give `level(u) + 1 - level(v)` for every
    /// internal edge; the gcd of those differences is the component's period.
    pub fn is_aperiodic(&self) -> Result<bool> {
        let comps = self.sccs();
        let comp_of = self.component_index(&comps);
        let mut g = 0;
        let mut any = false;
        for comp in &comps {
            if let Some(p) = self.component_period(comp, &comp_of) {
                any = true;
                g = gcd(g, p);
            }
        }
        if !any {
            return Err(Error::Domain("no cycles".into()));
        }
        Ok(g == 1)
    }

    pub fn is_admissible(&self) -> bool {
        self.out_degree_uniform().is_some() && self.is_aperiodic().unwrap_or(false)
    }

    /// Whether some coloring yields a synchronizing automaton.
    ///
    /// That happens exactly when there is one sink component and it is
    /// aperiodic: the sink can be colored by the Road Coloring Theorem, and
    /// every other vertex can be pushed into the closed sink one at a time.
    pub fn is_road_colorable(&self) -> bool {
        let Some(d) = self.out_degree_uniform() else { return false };
        if d == 0 {
            return self.t() == 1;
        }
        let comps = self.sccs();
        let comp_of = self.component_index(&comps);
        let sinks: Vec<&Vec<State>> = comps
            .iter()
            .filter(|c| c.iter().all(|&u| self.out[u].iter().all(|&v| comp_of[v] == comp_of[u])))
            .collect();
        match sinks[..] {
            [sink] => self.component_period(sink, &comp_of) == Some(1),
            _ => false,
        }
    }

    /// Shortest distance from every vertex to `q`; `None` when q is unreachable.
    pub fn distance_layers(&self, q: State) -> Vec<Option<usize>> {
        self.distances_to_set(&[q])
    }

    /// Shortest distance from every vertex into a target set.
    pub fn distances_to_set(&self, targets: &[State]) -> Vec<Option<usize>> {
        let t = self.t();
        let mut rev = vec![Vec::new(); t];
        for (u, slots) in self.out.iter().enumerate() {
            for &v in slots {
                rev[v].push(u);
            }
        }
        let mut dist = vec![None; t];
        let mut queue = VecDeque::new();
        for &q in targets {
            if dist[q].is_none() {
                dist[q] = Some(0);
                queue.push_back(q);
            }
        }
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].unwrap();
            for &u in &rev[v] {
                if dist[u].is_none() {
                    dist[u] = Some(dv + 1);
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// The automaton obtained by reading each slot's letter off the coloring.
    pub fn apply_coloring(&self, c: &Coloring) -> Result<Dfa> {
        let d = self.degree_or_err()?;
        if d == 0 {
            return invalid("out-degree 0 gives no letters");
        }
        if c.t() != self.t() || c.degree() != d {
            return invalid("coloring does not fit the graph");
        }
        Dfa::from_fn(self.t(), d, |v, a| self.out[v][c.slot_of(v, a)])
    }

    /// Number of colorings, `(d!)^t`, if it fits in a u128.
    pub fn coloring_count(&self) -> Option<u128> {
        let d = self.out_degree_uniform()?;
        let per = (1..=d as u128).try_fold(1u128, |acc, x| acc.checked_mul(x))?;
        (0..self.t()).try_fold(1u128, |acc, _| acc.checked_mul(per))
    }

    /// The coloring at a position of the enumeration order.
    ///
    /// The order is lexicographic over vertices (vertex 0 most significant),
    /// each vertex ranging over its slot permutations in lexicographic rank.
    pub fn coloring_at(&self, mut index: u128) -> Result<Coloring> {
        let d = self.degree_or_err()?;
        let per: u128 = (1..=d as u128).product();
        let mut ranks = vec![0u128; self.t()];
        for r in ranks.iter_mut().rev() {
            *r = index % per;
            index /= per;
        }
        if index != 0 {
            return invalid("coloring index out of range");
        }
        let slot_letter = ranks.iter().map(|&r| unrank_permutation(r, d)).collect();
        Coloring::new(slot_letter)
    }

    /// All colorings in enumeration order.
    pub fn enumerate_colorings(&self) -> Result<impl Iterator<Item = Coloring> + '_> {
        self.degree_or_err()?;
        let total =
            self.coloring_count().ok_or_else(|| Error::SizeLimit("coloring count overflows".into()))?;
        Ok((0..total).map(move |i| self.coloring_at(i).expect("index in range")))
    }

    /// Writes the `graph <t> <d>` format.
    pub fn to_text(&self) -> Result<String> {
        let d = self.degree_or_err()?;
        let mut s = format!("graph {} {}\n", self.t(), d);
        for slots in &self.out {
            let row: Vec<String> = slots.iter().map(|x| x.to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        Ok(s)
    }

    pub fn parse(text: &str) -> Result<Multigraph> {
        let (g, colors) = parse_graph_and_colors(text)?;
        if colors.is_some() {
            return invalid("unexpected `colors` section");
        }
        Ok(g)
    }

    /// Graph text followed by a `colors` line and one row of slot letters per vertex.
    pub fn to_text_with_coloring(&self, c: &Coloring) -> Result<String> {
        let d = self.degree_or_err()?;
        if c.t() != self.t() || c.degree() != d {
            return invalid("coloring does not fit the graph");
        }
        let mut s = self.to_text()?;
        s.push_str("colors\n");
        for v in 0..self.t() {
            let row: Vec<String> = (0..d).map(|slot| render_letter(c.letter_of(v, slot), d)).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        Ok(s)
    }

    /// DOT rendering with one edge per slot, labelled when a coloring is given.
    pub fn to_dot(&self, coloring: Option<&Coloring>, names: Option<&[String]>) -> String {
        let d = self.out.first().map_or(0, Vec::len);
        let mut s = String::from("digraph G {\n");
        for v in 0..self.t() {
            match names {
                Some(n) => writeln!(s, "  {v} [label=\"{}\"];", n[v]).unwrap(),
                None => writeln!(s, "  {v};").unwrap(),
            }
        }
        for (v, slots) in self.out.iter().enumerate() {
            for (slot, &w) in slots.iter().enumerate() {
                match coloring {
                    Some(c) => {
                        writeln!(s, "  {v} -> {w} [label=\"{}\"];", render_letter(c.letter_of(v, slot), d))
                            .unwrap()
                    }
                    None => writeln!(s, "  {v} -> {w};").unwrap(),
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Parses a graph, with an optional trailing `colors` section.
pub fn parse_graph_and_colors(text: &str) -> Result<(Multigraph, Option<Coloring>)> {
    let mut lines = content_lines(text);
    let (t, d) = parse_header(lines.next(), "graph")?;
    let out = parse_rows(&mut lines, t, d)?;
    let g = Multigraph::new(out)?;
    match lines.next() {
        None => Ok((g, None)),
        Some("colors") => {
            let mut slot_letter = Vec::with_capacity(t);
            for v in 0..t {
                let line =
                    lines.next().ok_or_else(|| Error::Invalid(format!("missing colors for vertex {v}")))?;
                let row = parse_word(line, d)?;
                if row.len() != d {
                    return invalid(format!("colors row {v} has {} letters, expected {d}", row.len()));
                }
                slot_letter.push(row);
            }
            if let Some(extra) = lines.next() {
                return invalid(format!("unexpected trailing line `{extra}`"));
            }
            Ok((g, Some(Coloring::new(slot_letter)?)))
        }
        Some(other) => invalid(format!("unexpected line `{other}`")),
    }
}

/// Per-vertex bijection between out-edge slots and letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring {
    slot_letter: Vec<Vec<Letter>>,
    letter_slot: Vec<Vec<usize>>,
}

impl Coloring {
    /// `slot_letter[v][slot]` is the letter carried by that slot.
    pub fn new(slot_letter: Vec<Vec<Letter>>) -> Result<Self> {
        let d = slot_letter.first().map_or(0, Vec::len);
        let mut letter_slot = Vec::with_capacity(slot_letter.len());
        for (v, row) in slot_letter.iter().enumerate() {
            if row.len() != d {
                return invalid(format!("vertex {v} has {} slots, expected {d}", row.len()));
            }
            let mut inv = vec![usize::MAX; d];
            for (slot, &l) in row.iter().enumerate() {
                if l >= d || inv[l] != usize::MAX {
                    return invalid(format!("vertex {v}: slot letters are not a permutation"));
                }
                inv[l] = slot;
            }
            letter_slot.push(inv);
        }
        Ok(Coloring { slot_letter, letter_slot })
    }

    /// Slot i carries letter i everywhere.
    pub fn identity(t: usize, d: usize) -> Self {
        Coloring::new(vec![(0..d).collect(); t]).expect("identity is a permutation")
    }

    pub fn t(&self) -> usize {
        self.slot_letter.len()
    }

    pub fn degree(&self) -> usize {
        self.slot_letter.first().map_or(0, Vec::len)
    }

    pub fn letter_of(&self, v: State, slot: usize) -> Letter {
        self.slot_letter[v][slot]
    }

    pub fn slot_of(&self, v: State, letter: Letter) -> usize {
        self.letter_slot[v][letter]
    }

    pub fn slot_letters(&self) -> &[Vec<Letter>] {
        &self.slot_letter
    }

    /// Exchanges letters `a` and `b` at vertex `v`.
    pub fn swap_at(&mut self, v: State, a: Letter, b: Letter) {
        let (sa, sb) = (self.letter_slot[v][a], self.letter_slot[v][b]);
        self.slot_letter[v][sa] = b;
        self.slot_letter[v][sb] = a;
        self.letter_slot[v][a] = sb;
        self.letter_slot[v][b] = sa;
    }
}

pub(crate) fn unrank_permutation(mut rank: u128, d: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..d).collect();
    let mut fact: u128 = (1..d as u128).product::<u128>().max(1);
    let mut perm = Vec::with_capacity(d);
    for i in (0..d).rev() {
        let idx = (rank / fact) as usize;
        rank %= fact;
        perm.push(pool.remove(idx));
        if i > 0 {
            fact /= i as u128;
        }
    }
    perm
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
