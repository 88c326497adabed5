//! Deterministic finite automata, state sets and the Černý family.

use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::text::{content_lines, parse_header, parse_usizes};
use crate::{Letter, State};

/// A complete DFA over states `0..t` and letters `0..alphabet_size`.
///
/// Transitions are stored letter-major so that the image of a state set
/// under one letter is a single pass over one column.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dfa {
    t: usize,
    alphabet_size: usize,
    columns: Vec<Vec<State>>,
}

impl Dfa {
    /// Builds a DFA from per-state rows: `rows[s][a]` is the target of `s` under `a`.
    pub fn new(t: usize, alphabet_size: usize, rows: &[Vec<State>]) -> Result<Self> {
        if t == 0 || alphabet_size == 0 {
            return invalid("a dfa needs at least one state and one letter");
        }
        if rows.len() != t {
            return invalid(format!("expected {t} rows, got {}", rows.len()));
        }
        let mut columns = vec![vec![0; t]; alphabet_size];
        for (s, row) in rows.iter().enumerate() {
            if row.len() != alphabet_size {
                return invalid(format!("row {s} has {} entries, expected {alphabet_size}", row.len()));
            }
            for (a, &target) in row.iter().enumerate() {
                if target >= t {
                    return invalid(format!("transition {s} --{a}--> {target} leaves 0..{t}"));
                }
                columns[a][s] = target;
            }
        }
        Ok(Dfa { t, alphabet_size, columns })
    }

    pub fn from_fn(t: usize, alphabet_size: usize, f: impl Fn(State, Letter) -> State) -> Result<Self> {
        let rows: Vec<Vec<State>> = (0..t).map(|s| (0..alphabet_size).map(|a| f(s, a)).collect()).collect();
        Dfa::new(t, alphabet_size, &rows)
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    #[inline]
    pub fn step(&self, s: State, a: Letter) -> State {
        self.columns[a][s]
    }

    /// The whole transition column of a letter.
    pub fn column(&self, a: Letter) -> &[State] {
        &self.columns[a]
    }

    pub fn row(&self, s: State) -> Vec<State> {
        (0..self.alphabet_size).map(|a| self.columns[a][s]).collect()
    }

    fn check_word(&self, w: &[Letter]) -> Result<()> {
        match w.iter().find(|&&a| a >= self.alphabet_size) {
            Some(a) => {
                invalid(format!("letter {a} out of range for alphabet of size {}", self.alphabet_size))
            }
            None => Ok(()),
        }
    }

    /// Follows a word from one state.
    pub fn run(&self, s: State, w: &[Letter]) -> Result<State> {
        self.check_word(w)?;
        Ok(w.iter().fold(s, |s, &a| self.step(s, a)))
    }

    /// Image of `s` under `w`, read left to right.
    pub fn apply_word(&self, s: &StateSet, w: &[Letter]) -> Result<StateSet> {
        self.check_word(w)?;
        if s.universe() != self.t {
            return invalid("state set universe does not match the automaton");
        }
        let mut cur = s.clone();
        for &a in w {
            cur = cur.image(self, a);
        }
        Ok(cur)
    }

    /// Active states after each prefix of `w`, starting with the full set.
    pub fn activity_trace(&self, w: &[Letter]) -> Result<Vec<StateSet>> {
        self.check_word(w)?;
        let mut trace = Vec::with_capacity(w.len() + 1);
        let mut cur = StateSet::full(self.t);
        trace.push(cur.clone());
        for &a in w {
            cur = cur.image(self, a);
            trace.push(cur.clone());
        }
        Ok(trace)
    }

    /// True when `w` maps every state to one state.
    pub fn is_reset_word(&self, w: &[Letter]) -> Result<bool> {
        Ok(self.apply_word(&StateSet::full(self.t), w)?.len() == 1)
    }

    /// Same automaton with a fresh identity letter inserted as letter 0.
    pub fn with_identity_letter(&self) -> Dfa {
        let mut columns = Vec::with_capacity(self.alphabet_size + 1);
        columns.push((0..self.t).collect());
        columns.extend(self.columns.iter().cloned());
        Dfa { t: self.t, alphabet_size: self.alphabet_size + 1, columns }
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parses the `dfa <t> <alphabet_size>` format.
    pub fn parse(text: &str) -> Result<Dfa> {
        let mut lines = content_lines(text);
        let (t, k) = parse_header(lines.next(), "dfa")?;
        let rows = parse_rows(&mut lines, t, k)?;
        if let Some(extra) = lines.next() {
            return invalid(format!("unexpected trailing line `{extra}`"));
        }
        Dfa::new(t, k, &rows)
    }
}

pub(crate) fn parse_rows<'a>(
    lines: &mut impl Iterator<Item = &'a str>,
    t: usize,
    width: usize,
) -> Result<Vec<Vec<usize>>> {
    let mut rows = Vec::with_capacity(t);
    for i in 0..t {
        let line = lines.next().ok_or_else(|| Error::Invalid(format!("expected {t} rows, found {i}")))?;
        let row = parse_usizes(line)?;
        if row.len() != width {
            return invalid(format!("row {i} has {} entries, expected {width}", row.len()));
        }
        rows.push(row);
    }
    Ok(rows)
}

impl fmt::Display for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dfa {} {}", self.t, self.alphabet_size)?;
        for s in 0..self.t {
            let row: Vec<String> = self.row(s).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// The Černý automaton with `n` states.
///
/// Letter 0 sends state 0 to 1 and fixes every other state; letter 1 is the
/// cyclic shift `i -> i+1 mod n`. Its shortest reset word has length `(n-1)^2`.
pub fn cerny_automaton(n: usize) -> Result<Dfa> {
    if n < 2 {
        return invalid("the Černý automaton needs n >= 2");
    }
    Dfa::from_fn(n, 2, |s, a| match (a, s) {
        (0, 0) => 1,
        (0, s) => s,
        (_, s) => (s + 1) % n,
    })
}

/// A subset of `0..universe`, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateSet {
    universe: usize,
    bits: Vec<u64>,
}

impl StateSet {
    pub fn empty(universe: usize) -> Self {
        StateSet { universe, bits: vec![0; universe.div_ceil(64)] }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = StateSet::empty(universe);
        for i in 0..universe {
            s.insert(i);
        }
        s
    }

    pub fn singleton(universe: usize, state: State) -> Self {
        let mut s = StateSet::empty(universe);
        s.insert(state);
        s
    }

    pub fn from_states(universe: usize, states: impl IntoIterator<Item = State>) -> Self {
        let mut s = StateSet::empty(universe);
        for x in states {
            s.insert(x);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, s: State) {
        assert!(s < self.universe, "state {s} outside 0..{}", self.universe);
        self.bits[s / 64] |= 1 << (s % 64);
    }

    pub fn contains(&self, s: State) -> bool {
        s < self.universe && self.bits[s / 64] >> (s % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = State> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    /// Image under one letter; one pass over the members.
    pub fn image(&self, a: &Dfa, letter: Letter) -> StateSet {
        let col = a.column(letter);
        let mut out = StateSet::empty(self.universe);
        for s in self.iter() {
            out.insert(col[s]);
        }
        out
    }

    /// Packs the set into a single word when the universe fits.
    pub fn as_mask(&self) -> Option<u64> {
        (self.universe <= 64).then(|| self.bits.first().copied().unwrap_or(0))
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
