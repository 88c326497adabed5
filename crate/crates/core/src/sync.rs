//! Synchronization: the Pin bound, the pair-merging test and shortest reset words.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use crate::automaton::{Dfa, StateSet};
use crate::{Letter, Word};

/// `(t^3 - t) / 6`, the upper bound on the shortest reset word of a
/// synchronizing automaton with t states.
pub fn pin_bound(t: u64) -> u64 {
    let t = t as u128;
    ((t * t * t - t) / 6) as u64
}

/// Polynomial test: every pair of states can be merged.
///
/// Works backwards from the diagonal in the pair automaton. A pair is
/// mergeable if some letter sends it to a merged or mergeable pair.
pub fn is_synchronizing(a: &Dfa) -> bool {
    let t = a.t();
    if t == 1 {
        return true;
    }
    let k = a.alphabet_size();
    let mut pre: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); t]; k];
    for (l, pre_l) in pre.iter_mut().enumerate() {
        for s in 0..t {
            pre_l[a.step(s, l)].push(s);
        }
    }
    let pair = |p: usize, q: usize| if p < q { p * t + q } else { q * t + p };
    let mut good = vec![false; t * t];
    let mut queue: VecDeque<(usize, usize)> = (0..t).map(|s| (s, s)).collect();
    let mut count = 0;
    let total = t * (t - 1) / 2;
    while let Some((r, s)) = queue.pop_front() {
        for pre_l in &pre {
            for &p in &pre_l[r] {
                for &q in &pre_l[s] {
                    if p != q && !good[pair(p, q)] {
                        good[pair(p, q)] = true;
                        count += 1;
                        if count == total {
                            return true;
                        }
                        queue.push_back((p, q));
                    }
                }
            }
        }
    }
    false
}

/// A shortest reset word, or `None` if there is none (of length at most
/// `limit`, when given).
///
/// Breadth-first search over images of the full state set. Letters are
/// expanded in increasing order and each subset is expanded once, so the
/// result is the lexicographically least among the shortest reset words.
pub fn shortest_reset_word(a: &Dfa, limit: Option<usize>) -> Option<Word> {
    let t = a.t();
    if t <= 64 {
        let cols: Vec<&[usize]> = (0..a.alphabet_size()).map(|l| a.column(l)).collect();
        let full = if t == 64 { u64::MAX } else { (1u64 << t) - 1 };
        bfs(
            full,
            a.alphabet_size(),
            limit,
            |&m| m.count_ones() == 1,
            |&m, l| {
                let col = cols[l];
                let mut img = 0u64;
                let mut rest = m;
                while rest != 0 {
                    let s = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    img |= 1 << col[s];
                }
                img
            },
        )
    } else {
        bfs(StateSet::full(t), a.alphabet_size(), limit, |s| s.len() == 1, |s, l| s.image(a, l))
    }
}

fn bfs<K: Clone + Eq + Hash>(
    start: K,
    k: usize,
    limit: Option<usize>,
    done: impl Fn(&K) -> bool,
    image: impl Fn(&K, Letter) -> K,
) -> Option<Word> {
    if done(&start) {
        return Some(Vec::new());
    }
    // parent[node] = (predecessor id, letter); ids index `nodes`.
    let mut nodes: Vec<K> = vec![start.clone()];
    let mut parent: Vec<(usize, Letter)> = vec![(usize::MAX, 0)];
    let mut depth: Vec<usize> = vec![0];
    let mut seen: HashMap<K, usize> = HashMap::from([(start, 0)]);
    let mut head = 0;
    while head < nodes.len() {
        let id = head;
        head += 1;
        if limit.is_some_and(|lim| depth[id] >= lim) {
            continue;
        }
        for l in 0..k {
            let next = image(&nodes[id], l);
            if seen.contains_key(&next) {
                continue;
            }
            let nid = nodes.len();
            seen.insert(next.clone(), nid);
            parent.push((id, l));
            depth.push(depth[id] + 1);
            let finished = done(&next);
            nodes.push(next);
            if finished {
                let mut word = Vec::new();
                let mut cur = nid;
                while parent[cur].0 != usize::MAX {
                    word.push(parent[cur].1);
                    cur = parent[cur].0;
                }
                word.reverse();
                return Some(word);
            }
        }
    }
    None
}

/// Is there a reset word of length at most `k`?
///
/// Once `k` reaches the Pin bound the answer is just synchronizability.
pub fn syn_decide(a: &Dfa, k: usize) -> bool {
    if k as u64 >= pin_bound(a.t() as u64) {
        return is_synchronizing(a);
    }
    shortest_reset_word(a, Some(k)).is_some()
}
