//! Composing many "is there a reset word of length at most d_i" instances
//! over t states into one instance whose answer is their disjunction.
//!
//! The composed automaton keeps the t base states, adds an absorbing dead
//! state D, and adds a guard table of cells `(h, k, flag)` with rows
//! `h in 0..=z(t)`, columns `k in 0..=q(m)` and flags T/F. Any reset word
//! has to walk the guard table down one row per letter, which forces the
//! shape `alpha_i y kappa^(z-1-d_i) omega_s` on the short ones.

use std::fmt::Write as _;

use crate::automaton::{parse_rows, Dfa, StateSet};
use crate::error::{invalid, Error, Result};
use crate::sync::{is_synchronizing, pin_bound, shortest_reset_word, syn_decide};
use crate::text::{content_lines, parse_header};
use crate::{Letter, State, Word};

/// Upper bound on the words enumerated by [`verify_c1_c2_c3`].
pub const MAX_VERIFY_WORDS: u128 = 100_000_000;

/// A batch as read from disk: automata over t states with target lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatchInput {
    pub t: usize,
    pub items: Vec<(Dfa, usize)>,
}

impl BatchInput {
    /// Parses `batch <m> <t>` followed by m blocks `item <d_i> <letters>`,
    /// each followed by t rows (a `dfa` header line inside a block is allowed).
    pub fn parse(text: &str) -> Result<BatchInput> {
        let mut lines = content_lines(text).peekable();
        let (m, t) = parse_header(lines.next(), "batch")?;
        let mut items = Vec::with_capacity(m);
        for i in 0..m {
            let (d, k) = parse_header(lines.next(), "item")
                .map_err(|e| Error::Invalid(format!("item {}: {e}", i + 1)))?;
            if let Some(line) = lines.peek() {
                if line.starts_with("dfa") {
                    let (tt, kk) = parse_header(lines.next(), "dfa")?;
                    if (tt, kk) != (t, k) {
                        return invalid(format!("item {}: dfa header disagrees with batch", i + 1));
                    }
                }
            }
            let rows = parse_rows(&mut lines, t, k)?;
            items.push((Dfa::new(t, k, &rows)?, d));
        }
        if let Some(extra) = lines.next() {
            return invalid(format!("unexpected trailing line `{extra}`"));
        }
        Ok(BatchInput { t, items })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("batch {} {}\n", self.items.len(), self.t);
        for (a, d) in &self.items {
            writeln!(s, "item {} {}", d, a.alphabet_size()).unwrap();
            for st in 0..a.t() {
                let row: Vec<String> = a.row(st).iter().map(|x| x.to_string()).collect();
                s.push_str(&row.join(" "));
                s.push('\n');
            }
        }
        s
    }
}

/// One surviving instance; letter 0 of `dfa` is the identity letter kappa.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatchItem {
    pub dfa: Dfa,
    pub d: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionBatch {
    pub t: usize,
    pub items: Vec<BatchItem>,
}

impl CompositionBatch {
    pub fn m(&self) -> usize {
        self.items.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preprocessed {
    Answer(bool),
    Batch(CompositionBatch),
}

/// Settles items with `d_i >= z(t)` by the polynomial test (any YES ends
/// the run), drops the rest of them, and prepends kappa to the survivors.
pub fn preprocess(raw: &BatchInput) -> Result<Preprocessed> {
    let t = raw.t;
    let z = pin_bound(t as u64);
    let mut items = Vec::new();
    for (i, (a, d)) in raw.items.iter().enumerate() {
        if a.t() != t {
            return invalid(format!("item {} has {} states, expected {t}", i + 1, a.t()));
        }
        if *d as u64 >= z {
            if is_synchronizing(a) {
                return Ok(Preprocessed::Answer(true));
            }
            continue;
        }
        items.push(BatchItem { dfa: a.with_identity_letter(), d: *d });
    }
    if items.is_empty() {
        return Ok(Preprocessed::Answer(false));
    }
    Ok(Preprocessed::Batch(CompositionBatch { t, items }))
}

/// With `m >= 2^t` the instances are decided one by one.
pub fn big_m_branch(batch: &CompositionBatch) -> Option<bool> {
    let big = batch.t < usize::BITS as usize && batch.m() >= 1usize << batch.t;
    big.then(|| batch.items.iter().any(|it| syn_decide(&it.dfa, it.d)))
}

/// `floor(log2(m + 1))`.
pub fn q_of(m: usize) -> usize {
    (usize::BITS - 1 - (m + 1).leading_zeros()) as usize
}

/// The columns named by the binary digits of `i`.
pub fn pattern_subset(i: usize, m: usize) -> Result<Vec<usize>> {
    if i == 0 || i > m {
        return invalid(format!("pattern index {i} outside 1..={m}"));
    }
    Ok((0..=q_of(m)).filter(|&b| i >> b & 1 == 1).collect())
}

/// `(pi_T, pi_F)` as lookup tables on the columns: each cycles through
/// its target set in increasing order.
pub fn pattern_functions(i: usize, m: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let t_set = pattern_subset(i, m)?;
    let f_set: Vec<usize> = (0..=q_of(m)).filter(|k| !t_set.contains(k)).collect();
    let cycle = |set: &[usize]| (0..=q_of(m)).map(|k| set[k % set.len()]).collect();
    Ok((cycle(&t_set), cycle(&f_set)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flag {
    T,
    F,
}

/// The composed automaton with names for its states and letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComposedAutomaton {
    pub dfa: Dfa,
    pub state_names: Vec<String>,
    pub letter_names: Vec<String>,
    pub d_prime: usize,
    pub t: usize,
    pub m: usize,
    pub z: usize,
    pub q: usize,
    /// Letter count of each item, kappa included.
    pub item_alphabets: Vec<usize>,
}

impl ComposedAutomaton {
    pub fn dead(&self) -> State {
        self.t
    }

    pub fn cell(&self, h: usize, k: usize, flag: Flag) -> State {
        cell_index(self.t, self.q, h, k, flag)
    }

    pub fn kappa(&self) -> Letter {
        0
    }

    /// Letter `x_{i,j}` for item `i` in 1..=m and its own letter `j >= 1`.
    pub fn x_letter(&self, i: usize, j: usize) -> Letter {
        assert!(j >= 1 && j < self.item_alphabets[i - 1]);
        1 + self.item_alphabets[..i - 1].iter().map(|k| k - 1).sum::<usize>() + (j - 1)
    }

    /// The letter of the composed automaton playing item `i`'s letter `j`
    /// (j = 0 is kappa).
    pub fn item_letter(&self, i: usize, j: usize) -> Letter {
        if j == 0 {
            self.kappa()
        } else {
            self.x_letter(i, j)
        }
    }

    pub fn alpha(&self, i: usize) -> Letter {
        assert!(i >= 1 && i <= self.m);
        1 + self.item_alphabets.iter().map(|k| k - 1).sum::<usize>() + (i - 1)
    }

    /// `omega_s` for a base state s.
    pub fn omega(&self, s: State) -> Letter {
        assert!(s < self.t);
        self.alpha(self.m) + 1 + s
    }

    /// Guard cells among `set`, as `(h, k, flag)`.
    pub fn active_cells(&self, set: &StateSet) -> Vec<(usize, usize, Flag)> {
        set.iter()
            .filter(|&s| s > self.t)
            .map(|s| {
                let c = s - self.t - 1;
                let flag = if c.is_multiple_of(2) { Flag::T } else { Flag::F };
                let hk = c / 2;
                (hk / (self.q + 1), hk % (self.q + 1), flag)
            })
            .collect()
    }
}

fn cell_index(t: usize, q: usize, h: usize, k: usize, flag: Flag) -> State {
    t + 1 + (h * (q + 1) + k) * 2 + (flag == Flag::F) as usize
}

/// `t + 1 + 2 (z(t) + 1) (q(m) + 1)`.
pub fn composed_size(t: usize, m: usize) -> usize {
    t + 1 + 2 * (pin_bound(t as u64) as usize + 1) * (q_of(m) + 1)
}

/// Builds the composed automaton. Needs `m < 2^t`.
pub fn compose(batch: &CompositionBatch) -> Result<ComposedAutomaton> {
    let (t, m) = (batch.t, batch.m());
    if m == 0 {
        return invalid("nothing to compose");
    }
    if t < usize::BITS as usize && m >= 1usize << t {
        return invalid("compose needs m < 2^t; use the direct branch");
    }
    let z64 = pin_bound(t as u64);
    let z = usize::try_from(z64).map_err(|_| Error::SizeLimit("z(t) overflows".into()))?;
    for (i, it) in batch.items.iter().enumerate() {
        if it.dfa.t() != t {
            return invalid(format!("item {} has {} states, expected {t}", i + 1, it.dfa.t()));
        }
        if it.d >= z {
            return invalid(format!("item {} has d = {} >= z(t); preprocess first", i + 1, it.d));
        }
        if (0..t).any(|s| it.dfa.step(s, 0) != s) {
            return invalid(format!("item {}: letter 0 is not the identity", i + 1));
        }
    }
    let q = q_of(m);
    let n = composed_size(t, m);
    let dead = t;
    let item_alphabets: Vec<usize> = batch.items.iter().map(|it| it.dfa.alphabet_size()).collect();
    let letters = 1 + item_alphabets.iter().map(|k| k - 1).sum::<usize>() + m + t;
    let cell = |h: usize, k: usize, f: Flag| cell_index(t, q, h, k, f);

    let mut columns: Vec<Vec<State>> = Vec::with_capacity(letters);
    let mut letter_names = Vec::with_capacity(letters);
    // One column per letter; `guard` gives the action on cell (h, k, flag).
    let mut push =
        |name: String, base: &dyn Fn(State) -> State, guard: &dyn Fn(usize, usize, Flag) -> State| {
            let mut col = vec![0; n];
            for (s, c) in col.iter_mut().enumerate().take(t) {
                *c = base(s);
            }
            col[dead] = dead;
            for h in 0..=z {
                for k in 0..=q {
                    for f in [Flag::T, Flag::F] {
                        col[cell(h, k, f)] = guard(h, k, f);
                    }
                }
            }
            columns.push(col);
            letter_names.push(name);
        };

    push("kappa".into(), &|s| s, &|h, k, f| match h {
        0 => cell(0, k, f),
        h if h == z => cell(0, k, f),
        h => cell(h + 1, k, f),
    });
    for (idx, it) in batch.items.iter().enumerate() {
        let i = idx + 1;
        let b = pattern_subset(i, m)?;
        for j in 1..it.dfa.alphabet_size() {
            let guard = |h: usize, k: usize, f: Flag| {
                if h == 0 || h > it.d {
                    return cell(0, k, f);
                }
                match (f, b.contains(&k)) {
                    (Flag::T, true) => cell(h + 1, k, Flag::T),
                    (Flag::F, false) => cell(h + 1, k, Flag::F),
                    _ => cell(0, k, Flag::T),
                }
            };
            push(format!("x_{{{i},{j}}}"), &|s| it.dfa.step(s, j), &guard);
        }
    }
    for i in 1..=m {
        let (pt, pf) = pattern_functions(i, m)?;
        push(format!("alpha_{i}"), &|s| s, &|_, k, f| match f {
            Flag::T => cell(1, pt[k], Flag::T),
            Flag::F => cell(1, pf[k], Flag::F),
        });
    }
    for sbar in 0..t {
        push(format!("omega_{}", sbar + 1), &|s| if s == sbar { dead } else { s }, &|h, k, f| {
            if h == z {
                dead
            } else {
                cell(0, k, f)
            }
        });
    }

    let mut state_names: Vec<String> = (1..=t).map(|s| s.to_string()).collect();
    state_names.push("D".into());
    for h in 0..=z {
        for k in 0..=q {
            state_names.push(format!("({h},{k},T)"));
            state_names.push(format!("({h},{k},F)"));
        }
    }
    let rows: Vec<Vec<State>> = (0..n).map(|s| columns.iter().map(|col| col[s]).collect()).collect();
    Ok(ComposedAutomaton {
        dfa: Dfa::new(n, letters, &rows)?,
        state_names,
        letter_names,
        d_prime: z + 1,
        t,
        m,
        z,
        q,
        item_alphabets,
    })
}

/// Result of the whole composition algorithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Composition {
    /// The answer was settled early; `dfa` with bound `d` is a fixed
    /// instance with that answer.
    Trivial {
        answer: bool,
        dfa: Dfa,
        d: usize,
    },
    Composed(ComposedAutomaton),
}

/// One state (YES) or two fixed states (NO), one letter, bound 0.
pub fn trivial_instance(answer: bool) -> (Dfa, usize) {
    let dfa = if answer { Dfa::new(1, 1, &[vec![0]]) } else { Dfa::new(2, 1, &[vec![0], vec![1]]) };
    (dfa.expect("fixed instance"), 0)
}

/// Preprocessing, then the direct branch or the construction.
pub fn run_composition(raw: &BatchInput) -> Result<Composition> {
    let trivial = |answer: bool| {
        let (dfa, d) = trivial_instance(answer);
        Composition::Trivial { answer, dfa, d }
    };
    match preprocess(raw)? {
        Preprocessed::Answer(a) => Ok(trivial(a)),
        Preprocessed::Batch(b) => match big_m_branch(&b) {
            Some(a) => Ok(trivial(a)),
            None => Ok(Composition::Composed(compose(&b)?)),
        },
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompositionReport {
    /// No reset word of length at most z(t).
    pub c1: bool,
    /// Every reset word of length z(t) + 1 has the guarded shape.
    pub c2: bool,
    /// Every assembled word resets the composed automaton.
    pub c3: bool,
    pub reset_words_found: u64,
    pub assembled_words: u64,
    /// Whether some item has a reset word within its bound.
    pub expected: bool,
    /// Whether the composed automaton has a reset word within `d'`.
    pub composed: bool,
}

impl CompositionReport {
    pub fn all_hold(&self) -> bool {
        self.c1 && self.c2 && self.c3 && self.expected == self.composed
    }
}

fn word_count(alphabet: usize, len: usize) -> u128 {
    (0..len).fold(1u128, |acc, _| acc.saturating_mul(alphabet as u128))
}

/// Checks C1, C2 and C3 by exhaustive search, within [`MAX_VERIFY_WORDS`].
pub fn verify_c1_c2_c3(ca: &ComposedAutomaton, batch: &CompositionBatch) -> Result<CompositionReport> {
    verify_c1_c2_c3_with(ca, batch, MAX_VERIFY_WORDS)
}

/// [`verify_c1_c2_c3`] with an explicit cap on the words enumerated.
pub fn verify_c1_c2_c3_with(
    ca: &ComposedAutomaton,
    batch: &CompositionBatch,
    max_words: u128,
) -> Result<CompositionReport> {
    let a = &ca.dfa;
    let len = ca.z + 1;
    let mut budget = word_count(a.alphabet_size(), len);
    for it in &batch.items {
        budget = budget.saturating_add(word_count(it.dfa.alphabet_size(), it.d));
    }
    if budget > max_words {
        return Err(Error::SizeLimit(format!(
            "exhaustive verification needs {budget} words, more than {max_words}"
        )));
    }
    let mut report = CompositionReport {
        c1: shortest_reset_word(a, Some(ca.z)).is_none(),
        c2: true,
        c3: true,
        ..Default::default()
    };

    let mut word = Vec::with_capacity(len);
    let mut shape_ok = true;
    let mut found = 0u64;
    enumerate_resets(a, &StateSet::full(a.t()), len, &mut word, &mut |w| {
        found += 1;
        if !has_guarded_shape(ca, batch, w) {
            shape_ok = false;
        }
    });
    report.c2 = shape_ok;
    report.reset_words_found = found;
    report.composed = found > 0;

    for (idx, it) in batch.items.iter().enumerate() {
        let i = idx + 1;
        let mut y = Vec::with_capacity(it.d);
        let full = StateSet::full(it.dfa.t());
        let mut assembled = Vec::new();
        enumerate_resets(&it.dfa, &full, it.d, &mut y, &mut |y| assembled.push(y.to_vec()));
        if !assembled.is_empty() {
            report.expected = true;
        }
        for y in assembled {
            let s = it.dfa.apply_word(&full, &y)?.iter().next().unwrap();
            let w = assemble(ca, i, &y, s);
            report.assembled_words += 1;
            if !a.is_reset_word(&w)? {
                report.c3 = false;
            }
        }
    }
    Ok(report)
}

/// `alpha_i y kappa^(z-1-d_i) omega_s` for item i and its own word y.
pub fn assemble(ca: &ComposedAutomaton, i: usize, y: &[Letter], s: State) -> Word {
    let d = y.len();
    let mut w = vec![ca.alpha(i)];
    w.extend(y.iter().map(|&j| ca.item_letter(i, j)));
    w.extend(std::iter::repeat_n(ca.kappa(), ca.z - 1 - d));
    w.push(ca.omega(s));
    w
}

/// Calls `f` on every word of length exactly `len` that maps `set` to a
/// single state.
fn enumerate_resets(a: &Dfa, set: &StateSet, len: usize, word: &mut Word, f: &mut dyn FnMut(&[Letter])) {
    if word.len() == len {
        if set.len() == 1 {
            f(word);
        }
        return;
    }
    for l in 0..a.alphabet_size() {
        let next = set.image(a, l);
        word.push(l);
        enumerate_resets(a, &next, len, word, f);
        word.pop();
    }
}

fn has_guarded_shape(ca: &ComposedAutomaton, batch: &CompositionBatch, w: &[Letter]) -> bool {
    let Some(i) = (1..=ca.m).find(|&i| ca.alpha(i) == w[0]) else { return false };
    let it = &batch.items[i - 1];
    let d = it.d;
    let Some(s) = (0..ca.t).find(|&s| ca.omega(s) == w[ca.z]) else { return false };
    let mut y = Vec::with_capacity(d);
    for &l in &w[1..=d] {
        match (0..it.dfa.alphabet_size()).find(|&j| ca.item_letter(i, j) == l) {
            Some(j) => y.push(j),
            None => return false,
        }
    }
    if w[d + 1..ca.z].iter().any(|&l| l != ca.kappa()) {
        return false;
    }
    let img = it.dfa.apply_word(&StateSet::full(ca.t), &y).expect("item letters");
    img.len() == 1 && img.contains(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::cerny_automaton;

    #[test]
    fn q_values() {
        assert_eq!(q_of(1), 1);
        assert_eq!(q_of(2), 1);
        assert_eq!(q_of(3), 2);
        assert_eq!(q_of(12), 3);
    }

    #[test]
    fn patterns_from_the_example() {
        assert_eq!(pattern_subset(11, 12).unwrap(), vec![0, 1, 3]);
        assert_eq!(pattern_subset(6, 12).unwrap(), vec![1, 2]);
        assert_eq!(pattern_subset(1, 1).unwrap(), vec![0]);
        assert!(pattern_subset(0, 3).is_err());
        assert!(pattern_subset(4, 3).is_err());
        let (pt, pf) = pattern_functions(1, 2).unwrap();
        assert_eq!((pt, pf), (vec![0, 0], vec![1, 1]));
    }

    #[test]
    fn batch_text_round_trip() {
        let b = BatchInput {
            t: 2,
            items: vec![(cerny_automaton(2).unwrap(), 1), (Dfa::new(2, 1, &[vec![1], vec![0]]).unwrap(), 0)],
        };
        let text = b.to_text();
        assert_eq!(BatchInput::parse(&text).unwrap(), b);
        let with_header = "batch 1 2\nitem 1 2\ndfa 2 2\n1 1\n1 0\n";
        assert_eq!(BatchInput::parse(with_header).unwrap().items[0].0, cerny_automaton(2).unwrap());
        assert!(BatchInput::parse("batch 1 2\nitem 1 2\n1 1\n").is_err());
    }

    #[test]
    fn preprocess_branches() {
        // z(2) = 1.
        let yes = BatchInput { t: 2, items: vec![(cerny_automaton(2).unwrap(), 1)] };
        assert_eq!(preprocess(&yes).unwrap(), Preprocessed::Answer(true));
        let perm = Dfa::new(2, 1, &[vec![1], vec![0]]).unwrap();
        let no = BatchInput { t: 2, items: vec![(perm.clone(), 5)] };
        assert_eq!(preprocess(&no).unwrap(), Preprocessed::Answer(false));
        let keep = BatchInput { t: 2, items: vec![(perm, 0)] };
        let Preprocessed::Batch(b) = preprocess(&keep).unwrap() else { panic!() };
        assert_eq!(b.items[0].dfa.column(0), &[0, 1]);
        assert_eq!(b.items[0].dfa.column(1), &[1, 0]);
    }

    #[test]
    fn dead_state_absorbs() {
        let a = cerny_automaton(3).unwrap().with_identity_letter();
        let batch = CompositionBatch { t: 3, items: vec![BatchItem { dfa: a, d: 3 }] };
        let ca = compose(&batch).unwrap();
        assert_eq!(ca.dfa.t(), composed_size(3, 1));
        for l in 0..ca.dfa.alphabet_size() {
            assert_eq!(ca.dfa.step(ca.dead(), l), ca.dead());
        }
        assert_eq!(ca.letter_names[0], "kappa");
        assert_eq!(ca.letter_names[ca.alpha(1)], "alpha_1");
        assert_eq!(ca.letter_names[ca.omega(2)], "omega_3");
        assert_eq!(ca.state_names[ca.cell(4, 1, Flag::F)], "(4,1,F)");
    }
}
