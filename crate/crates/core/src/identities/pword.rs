use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::words::{Letter, Word};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanStrategy {
    /// Blocks chosen to meet each condition directly.
    #[default]
    Greedy,
    /// Every ordering of the permutation list, concatenated. Only feasible
    /// for a single hyperedge.
    Permutations,
}

#[derive(Clone, Copy, Debug)]
pub struct PWordOptions {
    pub strategy: PlanStrategy,
    /// Drop blocks whose removal keeps (α), (β) and (γ).
    pub prune: bool,
}

impl Default for PWordOptions {
    fn default() -> Self {
        PWordOptions {
            strategy: PlanStrategy::Greedy,
            prune: true,
        }
    }
}

/// The block list `w_1, ..., w_n`, each block an ordered hyperedge.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PWordPlan {
    pub blocks: Vec<[Vertex; 3]>,
    pub strategy: PlanStrategy,
    pub pruned: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PWord {
    pub plan: PWordPlan,
    pub word: Word,
}

/// The letter standing for vertex `v`.
pub fn vertex_letter(v: Vertex) -> Letter {
    Letter::x(v)
}

/// `∏ (y w_i)² y`.
pub fn p_word_from_blocks(blocks: &[[Vertex; 3]]) -> Word {
    let mut w = Word::empty();
    for b in blocks {
        for _ in 0..2 {
            w.push(Letter::Y);
            for &v in b {
                w.push(vertex_letter(v));
            }
        }
    }
    w.push(Letter::Y);
    w
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PlanCheck {
    pub alpha: bool,
    pub beta: bool,
    pub gamma: bool,
}

impl PlanCheck {
    pub fn ok(&self) -> bool {
        self.alpha && self.beta && self.gamma
    }
}

fn permutations(e: [Vertex; 3]) -> [[Vertex; 3]; 6] {
    let [a, b, c] = e;
    [
        [a, b, c],
        [a, c, b],
        [b, a, c],
        [b, c, a],
        [c, a, b],
        [c, b, a],
    ]
}

fn sorted(mut b: [Vertex; 3]) -> [Vertex; 3] {
    b.sort_unstable();
    b
}

/// Checks conditions (α), (β) and (γ) on a block list. For (γ) the middle
/// block may be any ordering of the hyperedge.
pub fn check_plan(h: &Hypergraph, blocks: &[[Vertex; 3]]) -> PlanCheck {
    let present: HashSet<[Vertex; 3]> = blocks.iter().copied().collect();
    let alpha = blocks
        .iter()
        .all(|b| b[0] != b[1] && b[1] != b[2] && b[0] != b[2] && h.is_edge(b[0], b[1], b[2]))
        && h.edges()
            .iter()
            .all(|&e| permutations(e).iter().all(|p| present.contains(p)));
    let n = h.vertex_count();
    let mut seen = vec![false; n * n];
    for w in blocks.windows(2) {
        seen[w[0][2] as usize * n + w[1][0] as usize] = true;
    }
    let beta = seen.iter().all(|&s| s);
    let mut framed: HashSet<([Vertex; 3], Vertex)> = HashSet::new();
    for w in blocks.windows(3) {
        if w[0][2] == w[2][0] {
            framed.insert((sorted(w[1]), w[0][2]));
        }
    }
    let gamma = h.edges().iter().all(|&e| {
        let key = sorted(e);
        h.vertices()
            .filter(|v| !e.contains(v))
            .all(|v| framed.contains(&(key, v)))
    });
    PlanCheck { alpha, beta, gamma }
}

fn ending_with(h: &Hypergraph, u: Vertex) -> [Vertex; 3] {
    let e = h.edges()[h.edges_at(u)[0]];
    let mut rest = e.iter().copied().filter(|&x| x != u);
    [rest.next().unwrap(), rest.next().unwrap(), u]
}

fn starting_with(h: &Hypergraph, u: Vertex) -> [Vertex; 3] {
    let [a, b, c] = ending_with(h, u);
    [c, a, b]
}

fn greedy(h: &Hypergraph) -> Vec<[Vertex; 3]> {
    let mut blocks = Vec::new();
    for &e in h.edges() {
        blocks.extend(permutations(sorted(e)));
    }
    for u in h.vertices() {
        for v in h.vertices() {
            blocks.push(ending_with(h, u));
            blocks.push(starting_with(h, v));
        }
    }
    for &e in h.edges() {
        for u in h.vertices().filter(|v| !e.contains(v)) {
            blocks.push(ending_with(h, u));
            blocks.push(sorted(e));
            blocks.push(starting_with(h, u));
        }
    }
    blocks
}

fn next_permutation<T: Ord>(xs: &mut [T]) -> bool {
    let Some(i) = xs.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = xs
        .iter()
        .rposition(|x| *x > xs[i])
        .expect("pivot has a successor");
    xs.swap(i, j);
    xs[i + 1..].reverse();
    true
}

fn all_orderings(h: &Hypergraph) -> Result<Vec<[Vertex; 3]>> {
    if h.edge_count() != 1 {
        return Err(Error::InvalidParameter(format!(
            "the permutation strategy needs exactly one hyperedge, got {}",
            h.edge_count()
        )));
    }
    let mut list: Vec<[Vertex; 3]> = permutations(sorted(h.edges()[0])).to_vec();
    list.sort_unstable();
    let mut blocks = Vec::new();
    loop {
        blocks.extend_from_slice(&list);
        if !next_permutation(&mut list) {
            break;
        }
    }
    Ok(blocks)
}

fn prune(h: &Hypergraph, mut blocks: Vec<[Vertex; 3]>) -> Vec<[Vertex; 3]> {
    let mut i = blocks.len();
    while i > 0 {
        i -= 1;
        let removed = blocks.remove(i);
        if !check_plan(h, &blocks).ok() {
            blocks.insert(i, removed);
        }
    }
    blocks
}

/// Builds a block list satisfying (α), (β) and (γ) and the word
/// `∏ (y w_i)² y`, with `y` = [`Letter::Y`] and `x_u` = `x<u>`.
pub fn build_p_word(h: &Hypergraph, options: &PWordOptions) -> Result<PWord> {
    if let Some(&v) = h.isolated_vertices().first() {
        return Err(Error::Precondition(format!(
            "vertex {} lies in no hyperedge",
            h.name(v)
        )));
    }
    if h.edge_count() == 0 {
        return Err(Error::Precondition("hypergraph has no hyperedges".into()));
    }
    let mut blocks = match options.strategy {
        PlanStrategy::Greedy => greedy(h),
        PlanStrategy::Permutations => all_orderings(h)?,
    };
    if !check_plan(h, &blocks).ok() {
        return Err(Error::Falsified(
            "constructed block list breaks (α), (β) or (γ)".into(),
        ));
    }
    if options.prune {
        blocks = prune(h, blocks);
    }
    let word = p_word_from_blocks(&blocks);
    Ok(PWord {
        plan: PWordPlan {
            blocks,
            strategy: options.strategy,
            pruned: options.prune,
        },
        word,
    })
}
