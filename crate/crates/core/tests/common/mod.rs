//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use brandt_core::finmon::{Elem, FinMonoid};
use brandt_core::hypergraph::{Hypergraph, Vertex};
use brandt_core::hypermon::{HGMonoid, Variant};
use brandt_core::words::{Letter, Word};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---- 2x2 boolean matrices ----

pub type Mat = [[u8; 2]; 2];

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = ((a[i][0] & b[0][j]) | (a[i][1] & b[1][j])) as u8;
        }
    }
    c
}

pub const B21_MATRICES: [(&str, Mat); 6] = [
    ("0", [[0, 0], [0, 0]]),
    ("1", [[1, 0], [0, 1]]),
    ("a", [[0, 1], [0, 0]]),
    ("b", [[0, 0], [1, 0]]),
    ("ab", [[1, 0], [0, 0]]),
    ("ba", [[0, 0], [0, 1]]),
];

pub const A21_MATRICES: [(&str, Mat); 6] = [
    ("0", [[0, 0], [0, 0]]),
    ("1", [[1, 0], [0, 1]]),
    ("c", [[0, 1], [0, 0]]),
    ("d", [[1, 0], [1, 0]]),
    ("cd", [[1, 0], [0, 0]]),
    ("dc", [[0, 1], [0, 1]]),
];

/// Every product in `m` matches the matrix product of the labelled matrices.
pub fn matches_matrices(m: &FinMonoid, mats: &[(&str, Mat); 6]) -> bool {
    let by_mat: HashMap<Mat, &str> = mats.iter().map(|&(l, x)| (x, l)).collect();
    if m.size() != 6 || by_mat.len() != 6 {
        return false;
    }
    mats.iter().all(|&(la, a)| {
        mats.iter().all(|&(lb, b)| {
            let (Some(x), Some(y)) = (m.find_label(la), m.find_label(lb)) else {
                return false;
            };
            by_mat.get(&mat_mul(&a, &b)) == Some(&m.label(m.mul(x, y)))
        })
    })
}

// ---- cycles ----

/// Shortest cycle by exhaustive DFS over alternating vertex/edge sequences
/// with distinct vertices and distinct edges; `None` when acyclic.
pub fn brute_girth(n: usize, edges: &[[Vertex; 3]]) -> Option<usize> {
    fn dfs(
        edges: &[[Vertex; 3]],
        start: Vertex,
        at: Vertex,
        len: usize,
        cap: usize,
        used_v: &mut Vec<bool>,
        used_e: &mut Vec<bool>,
        best: &mut Option<usize>,
    ) {
        if best.is_some_and(|b| len + 1 >= b) || len >= cap {
            return;
        }
        for (i, e) in edges.iter().enumerate() {
            if used_e[i] || !e.contains(&at) {
                continue;
            }
            used_e[i] = true;
            for &w in e {
                if w == at {
                    continue;
                }
                if w == start && len + 1 >= 2 {
                    *best = Some(best.map_or(len + 1, |b| b.min(len + 1)));
                } else if !used_v[w as usize] {
                    used_v[w as usize] = true;
                    dfs(edges, start, w, len + 1, cap, used_v, used_e, best);
                    used_v[w as usize] = false;
                }
            }
            used_e[i] = false;
        }
    }
    let cap = n.min(edges.len());
    let mut best = None;
    for s in 0..n as Vertex {
        let mut used_v = vec![false; n];
        used_v[s as usize] = true;
        let mut used_e = vec![false; edges.len()];
        dfs(edges, s, s, 0, cap, &mut used_v, &mut used_e, &mut best);
    }
    best
}

/// Random 3-uniform hypergraph with distinct edges.
pub fn random_hypergraph(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Hypergraph {
    let mut all = Vec::new();
    for a in 0..n as Vertex {
        for b in a + 1..n as Vertex {
            for c in b + 1..n as Vertex {
                all.push([a, b, c]);
            }
        }
    }
    all.shuffle(rng);
    all.truncate(m.min(all.len()));
    Hypergraph::from_edges(n, &all).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vertex> {
    let mut p: Vec<Vertex> = (0..n as Vertex).collect();
    p.shuffle(rng);
    p
}

/// One representative of every girth-at-least-4 hypergraph with 1 to
/// `max_edges` edges, at most `max_vertices` vertices and no isolated
/// vertex, found by enumerating edge sets on `max_vertices` points.
pub fn small_shapes(max_edges: usize, max_vertices: usize) -> Vec<Hypergraph> {
    let n = max_vertices;
    let mut triples = Vec::new();
    for a in 0..n as Vertex {
        for b in a + 1..n as Vertex {
            for c in b + 1..n as Vertex {
                triples.push([a, b, c]);
            }
        }
    }
    let mut seen: BTreeMap<Vec<usize>, Hypergraph> = BTreeMap::new();
    let mut stack: Vec<(usize, Vec<[Vertex; 3]>)> = vec![(0, Vec::new())];
    while let Some((from, edges)) = stack.pop() {
        if !edges.is_empty() {
            if brute_girth(n, &edges).is_some_and(|g| g < 4) {
                continue;
            }
            let support: BTreeSet<Vertex> = edges.iter().flatten().copied().collect();
            let relabel: HashMap<Vertex, Vertex> = support
                .iter()
                .enumerate()
                .map(|(i, &v)| (v, i as Vertex))
                .collect();
            let compact: Vec<[Vertex; 3]> = edges.iter().map(|e| e.map(|v| relabel[&v])).collect();
            let key = shape_invariant(support.len(), &compact);
            seen.entry(key)
                .or_insert_with(|| Hypergraph::from_edges(support.len(), &compact).unwrap());
        }
        if edges.len() == max_edges {
            continue;
        }
        for i in from..triples.len() {
            // canonical growth: a new edge may use at most one unseen
            // block of fresh vertices, taken in order
            let used: BTreeSet<Vertex> = edges.iter().flatten().copied().collect();
            let next_fresh = used.len() as Vertex;
            let t = triples[i];
            let fresh: Vec<Vertex> = t.iter().copied().filter(|v| !used.contains(v)).collect();
            if fresh
                .iter()
                .enumerate()
                .any(|(k, &v)| v != next_fresh + k as Vertex)
            {
                continue;
            }
            let mut e2 = edges.clone();
            e2.push(t);
            stack.push((i + 1, e2));
        }
    }
    seen.into_values().collect()
}

/// Complete for girth-at-least-4 hypergraphs with at most 3 edges: vertex
/// count, edge count, sorted pairwise intersection sizes and sorted degrees.
fn shape_invariant(n: usize, edges: &[[Vertex; 3]]) -> Vec<usize> {
    let mut inter = Vec::new();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            inter.push(edges[i].iter().filter(|v| edges[j].contains(v)).count());
        }
    }
    inter.sort_unstable();
    let mut deg = vec![0; n];
    for e in edges {
        for &v in e {
            deg[v as usize] += 1;
        }
    }
    deg.sort_unstable();
    let mut key = vec![n, edges.len()];
    key.extend(inter);
    key.push(99);
    key.extend(deg);
    key
}

// ---- presentation closure by completion ----

const ZERO: u8 = 0;
const T: u8 = 1;

fn vsym(v: Vertex) -> u8 {
    2 + v as u8
}

fn shortlex_gt(a: &[u8], b: &[u8]) -> bool {
    a.len() > b.len() || (a.len() == b.len() && a > b)
}

/// Knuth-Bendix completion under shortlex order.
pub struct Rewriting {
    rules: Vec<(Vec<u8>, Vec<u8>)>,
}

impl Rewriting {
    pub fn reduce(&self, w: &[u8]) -> Vec<u8> {
        let mut w = w.to_vec();
        'outer: loop {
            for i in 0..w.len() {
                for (l, r) in &self.rules {
                    if w[i..].starts_with(l) {
                        let mut next = w[..i].to_vec();
                        next.extend_from_slice(r);
                        next.extend_from_slice(&w[i + l.len()..]);
                        w = next;
                        continue 'outer;
                    }
                }
            }
            return w;
        }
    }

    pub fn complete(equations: Vec<(Vec<u8>, Vec<u8>)>, max_rules: usize) -> Rewriting {
        let mut rw = Rewriting { rules: Vec::new() };
        let mut pending: VecDeque<(Vec<u8>, Vec<u8>)> = equations.into();
        while let Some((a, b)) = pending.pop_front() {
            let (a, b) = (rw.reduce(&a), rw.reduce(&b));
            if a == b {
                continue;
            }
            let (l, r) = if shortlex_gt(&a, &b) { (a, b) } else { (b, a) };
            // rules whose sides become reducible are re-queued
            let mut kept = Vec::new();
            for (ol, or) in rw.rules.drain(..) {
                if contains(&ol, &l) {
                    pending.push_back((ol, or));
                } else {
                    kept.push((ol, or));
                }
            }
            rw.rules = kept;
            rw.rules.push((l.clone(), r.clone()));
            for (ol, or) in rw.rules.clone() {
                for (p, q) in critical_pairs(&l, &r, &ol, &or) {
                    pending.push_back((p, q));
                }
                for (p, q) in critical_pairs(&ol, &or, &l, &r) {
                    pending.push_back((p, q));
                }
            }
            for i in 0..rw.rules.len() {
                let r2 = rw.reduce(&rw.rules[i].1);
                rw.rules[i].1 = r2;
            }
            assert!(rw.rules.len() <= max_rules, "completion did not settle");
        }
        rw
    }
}

fn contains(w: &[u8], u: &[u8]) -> bool {
    u.len() <= w.len() && w.windows(u.len()).any(|x| x == u)
}

/// Overlaps of a suffix of `l1` with a prefix of `l2`, and `l2` inside `l1`.
fn critical_pairs(l1: &[u8], r1: &[u8], l2: &[u8], r2: &[u8]) -> Vec<(Vec<u8>, Vec<u8>)> {
    let mut out = Vec::new();
    for k in 1..l1.len().min(l2.len()) {
        if l1[l1.len() - k..] == l2[..k] {
            let mut a = r1.to_vec();
            a.extend_from_slice(&l2[k..]);
            let mut b = l1[..l1.len() - k].to_vec();
            b.extend_from_slice(r2);
            out.push((a, b));
        }
    }
    if l2.len() < l1.len() {
        for i in 0..=l1.len() - l2.len() {
            if l1[i..i + l2.len()] == *l2 {
                let mut b = l1[..i].to_vec();
                b.extend_from_slice(r2);
                b.extend_from_slice(&l1[i + l2.len()..]);
                out.push((r1.to_vec(), b));
            }
        }
    }
    out
}

/// The defining relations of the variant over symbols `0`, `t` and the
/// vertices.
pub fn relations(h: &Hypergraph, variant: Variant) -> Vec<(Vec<u8>, Vec<u8>)> {
    let n = h.vertex_count() as Vertex;
    let z = vec![ZERO];
    let mut rel = Vec::new();
    let syms: Vec<u8> = std::iter::once(T)
        .chain((0..n).map(vsym))
        .chain(std::iter::once(ZERO))
        .collect();
    for &s in &syms {
        rel.push((vec![ZERO, s], z.clone()));
        rel.push((vec![s, ZERO], z.clone()));
    }
    rel.push((vec![T, T], z.clone()));
    let extends = |u: Vertex, v: Vertex| h.edges().iter().any(|e| e.contains(&u) && e.contains(&v));
    for u in 0..n {
        rel.push((vec![T, vsym(u), T], z.clone()));
        rel.push((vec![vsym(u), vsym(u)], z.clone()));
        for v in 0..n {
            rel.push((vec![T, vsym(u), vsym(v), T], z.clone()));
            if u != v {
                rel.push((vec![vsym(u), vsym(v)], vec![vsym(v), vsym(u)]));
                if !extends(u, v) {
                    rel.push((vec![vsym(u), vsym(v)], z.clone()));
                }
            }
        }
    }
    for e in h.edges() {
        rel.push((vec![T, vsym(e[0]), vsym(e[1]), vsym(e[2]), T], vec![T]));
    }
    if variant != Variant::Natural {
        let prod = |e: &[Vertex; 3]| e.iter().map(|&v| vsym(v)).collect::<Vec<u8>>();
        let e0 = prod(&h.edges()[0]);
        for e in h.edges() {
            rel.push((prod(e), e0.clone()));
        }
        let mut ete = e0.clone();
        ete.push(T);
        ete.extend_from_slice(&e0);
        rel.push((ete, e0));
    }
    if variant == Variant::Full {
        // pairs completed by the same vertex are equivalent
        for w in 0..n {
            let pairs: Vec<Vec<u8>> = h
                .edges()
                .iter()
                .filter(|e| e.contains(&w))
                .map(|e| e.iter().filter(|&&x| x != w).map(|&x| vsym(x)).collect())
                .collect();
            for p in &pairs {
                rel.push((p.clone(), pairs[0].clone()));
            }
        }
    }
    rel
}

pub struct Closure {
    pub rewriting: Rewriting,
    /// Irreducible words reachable from the empty word.
    pub words: Vec<Vec<u8>>,
}

pub fn presentation_closure(h: &Hypergraph, variant: Variant) -> Closure {
    let rewriting = Rewriting::complete(relations(h, variant), 20_000);
    let gens: Vec<u8> = std::iter::once(T)
        .chain((0..h.vertex_count() as Vertex).map(vsym))
        .collect();
    let mut seen: HashSet<Vec<u8>> = HashSet::from([Vec::new()]);
    let mut order = vec![Vec::new()];
    let mut queue = VecDeque::from([Vec::new()]);
    while let Some(w) = queue.pop_front() {
        for &g in &gens {
            let mut x = w.clone();
            x.push(g);
            let x = rewriting.reduce(&x);
            if seen.insert(x.clone()) {
                order.push(x.clone());
                queue.push_back(x);
            }
        }
    }
    Closure {
        rewriting,
        words: order,
    }
}

fn eval(b: &HGMonoid, w: &[u8]) -> Elem {
    let m = b.monoid();
    w.iter().fold(m.identity(), |acc, &s| {
        let x = match s {
            ZERO => m.zero().expect("built monoid has a zero"),
            T => b.t(),
            v => b.vertex((v - 2) as Vertex),
        };
        m.mul(acc, x)
    })
}

#[derive(Debug)]
pub struct OracleComparison {
    pub oracle_size: usize,
    pub built_size: usize,
    pub relations_hold: bool,
    pub bijective: bool,
    pub homomorphic: bool,
}

impl OracleComparison {
    pub fn ok(&self) -> bool {
        self.oracle_size == self.built_size
            && self.relations_hold
            && self.bijective
            && self.homomorphic
    }
}

/// Compares the built monoid with the presentation closure through the
/// generator map `t -> t`, `v -> v`. Without `full_table` the product
/// check is skipped: once the relations hold, equal sizes and a bijection
/// already force an isomorphism.
pub fn compare_with_oracle(b: &HGMonoid, full_table: bool) -> OracleComparison {
    let h = b.hypergraph();
    let closure = presentation_closure(h, b.variant());
    let relations_hold = relations(h, b.variant())
        .iter()
        .all(|(l, r)| eval(b, l) == eval(b, r));
    let image: Vec<Elem> = closure.words.iter().map(|w| eval(b, w)).collect();
    let distinct: HashSet<Elem> = image.iter().copied().collect();
    let bijective = distinct.len() == image.len() && image.len() == b.size();
    let m = b.monoid();
    let homomorphic = bijective
        && (!full_table
            || closure.words.iter().zip(&image).all(|(u, &x)| {
                closure.words.iter().zip(&image).all(|(v, &y)| {
                    let mut uv = u.clone();
                    uv.extend_from_slice(v);
                    eval(b, &closure.rewriting.reduce(&uv)) == m.mul(x, y)
                })
            }));
    OracleComparison {
        oracle_size: closure.words.len(),
        built_size: b.size(),
        relations_hold,
        bijective,
        homomorphic,
    }
}

// ---- p-words ----

#[derive(Debug, PartialEq, Eq)]
pub struct WordConditions {
    pub shape: bool,
    pub alpha: bool,
    pub beta: bool,
    pub gamma: bool,
}

/// Reads the blocks off `∏ (y w_i)² y` and checks the three conditions
/// directly, with `x_u` the indexed letter `u`.
pub fn word_conditions(h: &Hypergraph, p: &Word) -> WordConditions {
    let letters = p.letters();
    let mut segments: Vec<Vec<Letter>> = Vec::new();
    let mut shape = letters.first() == Some(&Letter::Y) && letters.last() == Some(&Letter::Y);
    let mut cur = Vec::new();
    for &l in &letters[1.min(letters.len())..] {
        if l == Letter::Y {
            segments.push(std::mem::take(&mut cur));
        } else {
            cur.push(l);
        }
    }
    shape &= cur.is_empty() && segments.len() % 2 == 0;
    let mut blocks: Vec<[Vertex; 3]> = Vec::new();
    for pair in segments.chunks(2) {
        if pair.len() != 2 || pair[0] != pair[1] || pair[0].len() != 3 {
            shape = false;
            break;
        }
        blocks.push([
            pair[0][0].id() as Vertex,
            pair[0][1].id() as Vertex,
            pair[0][2].id() as Vertex,
        ]);
    }
    if !shape {
        return WordConditions {
            shape,
            alpha: false,
            beta: false,
            gamma: false,
        };
    }
    let n = h.vertex_count() as Vertex;
    let is_edge_order = |b: &[Vertex; 3]| {
        let mut s = *b;
        s.sort_unstable();
        h.edges().contains(&s)
    };
    let alpha = blocks.iter().all(is_edge_order)
        && h.edges().iter().all(|e| {
            let [a, b, c] = *e;
            [
                [a, b, c],
                [a, c, b],
                [b, a, c],
                [b, c, a],
                [c, a, b],
                [c, b, a],
            ]
            .iter()
            .all(|o| blocks.contains(o))
        });
    let beta =
        (0..n).all(|u| (0..n).all(|v| blocks.windows(2).any(|w| w[0][2] == u && w[1][0] == v)));
    let gamma = h.edges().iter().all(|e| {
        (0..n).filter(|x| !e.contains(x)).all(|x| {
            (1..blocks.len().saturating_sub(1)).any(|j| {
                let mut m = blocks[j];
                m.sort_unstable();
                m == *e && blocks[j - 1][2] == x && blocks[j + 1][0] == x
            })
        })
    });
    WordConditions {
        shape,
        alpha,
        beta,
        gamma,
    }
}

/// Picks `k` distinct items in seeded random order.
pub fn sample_indices(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v.truncate(k);
    v
}

pub fn coin(rng: &mut ChaCha8Rng) -> bool {
    rng.gen()
}
