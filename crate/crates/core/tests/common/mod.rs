// Shared generators and brute-force oracles for the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use roadsync::{Dfa, Letter, Multigraph, StateSet, Word};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_dfa(rng: &mut impl Rng, t: usize, k: usize) -> Dfa {
    let rows: Vec<Vec<usize>> = (0..t).map(|_| (0..k).map(|_| rng.gen_range(0..t)).collect()).collect();
    Dfa::new(t, k, &rows).unwrap()
}

pub fn random_graph(rng: &mut impl Rng, t: usize, d: usize) -> Multigraph {
    Multigraph::new((0..t).map(|_| (0..d).map(|_| rng.gen_range(0..t)).collect()).collect()).unwrap()
}

/// All nondecreasing rows of length d over 0..t.
pub fn sorted_rows(t: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(t: usize, d: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for v in from..t {
            cur.push(v);
            rec(t, d, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(t, d, 0, &mut Vec::new(), &mut out);
    out
}

/// Calls `f` on every graph with t vertices of out-degree d whose slot
/// lists are sorted, i.e. every graph up to the order of its slots.
pub fn for_each_multiset_graph(t: usize, d: usize, mut f: impl FnMut(&Multigraph)) {
    let rows = sorted_rows(t, d);
    let mut idx = vec![0usize; t];
    loop {
        let g = Multigraph::new(idx.iter().map(|&i| rows[i].clone()).collect()).unwrap();
        f(&g);
        let mut v = t;
        loop {
            if v == 0 {
                return;
            }
            v -= 1;
            idx[v] += 1;
            if idx[v] < rows.len() {
                break;
            }
            idx[v] = 0;
        }
    }
}

/// Words of length `len` over `k` letters in lexicographic order.
pub fn words(k: usize, len: usize) -> impl Iterator<Item = Word> {
    let total = (k as u64).pow(len as u32);
    (0..total).map(move |mut i| {
        let mut w = vec![0; len];
        for pos in (0..len).rev() {
            w[pos] = (i % k as u64) as Letter;
            i /= k as u64;
        }
        w
    })
}

/// Shortest reset word by trying every word, shortest first, each length
/// in lexicographic order.
pub fn brute_shortest_reset(a: &Dfa, max_len: usize) -> Option<Word> {
    let full = StateSet::full(a.t());
    (0..=max_len)
        .find_map(|len| words(a.alphabet_size(), len).find(|w| a.apply_word(&full, w).unwrap().len() == 1))
}

/// Does some word of length exactly `len` reset `a`? Depth-first over
/// prefixes, sharing images.
pub fn has_reset_of_length(a: &Dfa, len: usize) -> bool {
    fn rec(a: &Dfa, set: &StateSet, left: usize) -> bool {
        if left == 0 {
            return set.len() == 1;
        }
        (0..a.alphabet_size()).any(|l| rec(a, &set.image(a, l), left - 1))
    }
    rec(a, &StateSet::full(a.t()), len)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Gcd of all closed-walk lengths up to t, read off boolean matrix powers;
/// `None` without cycles.
pub fn brute_period(g: &Multigraph) -> Option<usize> {
    let t = g.t();
    let mut reach: Vec<Vec<bool>> = (0..t).map(|v| (0..t).map(|w| v == w).collect()).collect();
    let mut period = 0;
    for len in 1..=t {
        reach = (0..t)
            .map(|v| {
                let mut row = vec![false; t];
                for u in (0..t).filter(|&u| reach[v][u]) {
                    for &w in g.out_edges(u) {
                        row[w] = true;
                    }
                }
                row
            })
            .collect();
        if (0..t).any(|v| reach[v][v]) {
            period = gcd(period, len);
        }
    }
    (period > 0).then_some(period)
}

/// Pairs of vertices that can meet when every step may take any out-edge
/// of each. When some pair cannot, no coloring synchronizes the graph.
pub fn all_pairs_can_meet(g: &Multigraph) -> bool {
    let t = g.t();
    let mut good = vec![vec![false; t]; t];
    for (v, row) in good.iter_mut().enumerate() {
        row[v] = true;
    }
    loop {
        let mut changed = false;
        for p in 0..t {
            for q in 0..t {
                if good[p][q] {
                    continue;
                }
                let can = g.out_edges(p).iter().any(|&x| g.out_edges(q).iter().any(|&y| good[x][y]));
                if can {
                    good[p][q] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    good.iter().all(|row| row.iter().all(|&b| b))
}

/// First-principles answer to "does some coloring synchronize g": a
/// synchronizing coloring found by enumeration, or a pair that can never
/// meet. `None` when neither shows up within `budget` colorings.
pub fn synchronizing_coloring_exists(g: &Multigraph, budget: u128) -> Option<bool> {
    if !all_pairs_can_meet(g) {
        return Some(false);
    }
    let total = g.coloring_count()?;
    for i in 0..total.min(budget) {
        let c = g.coloring_at(i).unwrap();
        if roadsync::sync::is_synchronizing(&g.apply_coloring(&c).unwrap()) {
            return Some(true);
        }
    }
    (total <= budget).then_some(false)
}

fn permutations(t: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; t], &mut out);
    out
}

/// Calls `f` on one graph from every isomorphism class of graphs with t
/// vertices of out-degree d, up to slot order. The representative is the
/// one whose tuple of row indices is lexicographically least among all
/// vertex relabelings.
pub fn for_each_graph_up_to_iso(t: usize, d: usize, mut f: impl FnMut(&Multigraph)) {
    let rows = sorted_rows(t, d);
    let index: std::collections::HashMap<Vec<usize>, usize> =
        rows.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    let perms: Vec<Vec<usize>> = permutations(t).into_iter().skip(1).collect();
    // moved[p][r]: index of row r after relabeling by perms[p].
    let moved: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| {
            rows.iter()
                .map(|r| {
                    let mut m: Vec<usize> = r.iter().map(|&v| p[v]).collect();
                    m.sort();
                    index[&m]
                })
                .collect()
        })
        .collect();
    let mut idx = vec![0usize; t];
    let mut image = vec![0usize; t];
    loop {
        let canonical = perms.iter().zip(&moved).all(|(p, mv)| {
            for v in 0..t {
                image[p[v]] = mv[idx[v]];
            }
            image >= idx
        });
        if canonical {
            let g = Multigraph::new(idx.iter().map(|&i| rows[i].clone()).collect()).unwrap();
            f(&g);
        }
        let mut v = t;
        loop {
            if v == 0 {
                return;
            }
            v -= 1;
            idx[v] += 1;
            if idx[v] < rows.len() {
                break;
            }
            idx[v] = 0;
        }
    }
}
