//! 3-uniform hypergraphs: girth, the girth conditions, the pair
//! equivalence, colourings and a seeded high-girth generator.

mod colouring;
mod generate;
mod json;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use colouring::{Colouring, MajorityMode, MajorityResult};
pub use generate::{generate_high_girth, GenerateConfig, Generated};
pub use json::{EdgeNames, GeneratorMeta, HypergraphFile};

pub type Vertex = u32;

/// Girth of a hypergraph; acyclic hypergraphs have infinite girth.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Girth {
    Finite(u32),
    Infinite,
}

impl Girth {
    pub fn at_least(self, n: u32) -> bool {
        self >= Girth::Finite(n)
    }

    /// Strictly greater than `n`.
    pub fn exceeds(self, n: u128) -> bool {
        match self {
            Girth::Infinite => true,
            Girth::Finite(g) => g as u128 > n,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => write!(f, "inf"),
        }
    }
}

/// Outcome of evaluating the three girth conditions.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Conditions {
    /// Every pair lies in at most one hyperedge.
    pub one: bool,
    /// A triple whose pairs all extend to hyperedges is a hyperedge.
    pub two: bool,
    /// Every 4-set contains a pair not extending to a hyperedge.
    pub three: bool,
}

/// A 3-uniform hypergraph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Hypergraph {
    names: Vec<String>,
    edges: Vec<[Vertex; 3]>,
    incidence: Vec<Vec<usize>>,
    // edges sorted, paired with their index in `edges`
    lookup: Vec<([Vertex; 3], usize)>,
}

impl Hypergraph {
    /// Validates and builds a hypergraph. Each edge must consist of three
    /// distinct in-range vertices; repeated edges are rejected.
    pub fn new(names: Vec<String>, edges: Vec<[Vertex; 3]>) -> Result<Self> {
        let n = names.len();
        let mut seen_names = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if let Some(j) = seen_names.insert(name.as_str(), i) {
                return Err(Error::InvalidHypergraph(format!(
                    "vertex name {name:?} used for vertices {j} and {i}"
                )));
            }
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            let mut e = *e;
            e.sort_unstable();
            if e.iter().any(|&v| v as usize >= n) {
                return Err(Error::InvalidHypergraph(format!(
                    "edge {i} references a vertex outside 0..{n}"
                )));
            }
            if e[0] == e[1] || e[1] == e[2] {
                return Err(Error::InvalidHypergraph(format!(
                    "edge {i} does not have 3 distinct vertices"
                )));
            }
            normalized.push(e);
        }
        let mut lookup: Vec<([Vertex; 3], usize)> = normalized.iter().copied().zip(0..).collect();
        lookup.sort_unstable();
        if let Some(w) = lookup.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidHypergraph(format!(
                "repeated hyperedge {:?}",
                w[0].0
            )));
        }
        let mut incidence = vec![Vec::new(); n];
        for (i, e) in normalized.iter().enumerate() {
            for &v in e {
                incidence[v as usize].push(i);
            }
        }
        Ok(Hypergraph {
            names,
            edges: normalized,
            incidence,
            lookup,
        })
    }

    /// Hypergraph on `n` vertices named `v0, v1, ...`.
    pub fn from_edges(n: usize, edges: &[[Vertex; 3]]) -> Result<Self> {
        let names = (0..n).map(|i| format!("v{i}")).collect();
        Self::new(names, edges.to_vec())
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[[Vertex; 3]] {
        &self.edges
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        0..self.names.len() as Vertex
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.names[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.incidence[v as usize].len()
    }

    /// Indices of the edges containing `v`.
    pub fn edges_at(&self, v: Vertex) -> &[usize] {
        &self.incidence[v as usize]
    }

    pub fn is_edge(&self, a: Vertex, b: Vertex, c: Vertex) -> bool {
        self.edge_index(a, b, c).is_some()
    }

    pub fn edge_index(&self, a: Vertex, b: Vertex, c: Vertex) -> Option<usize> {
        let mut e = [a, b, c];
        e.sort_unstable();
        self.lookup
            .binary_search_by(|(f, _)| f.cmp(&e))
            .ok()
            .map(|i| self.lookup[i].1)
    }

    /// Edges containing both `u` and `v`.
    pub fn edges_through_pair(&self, u: Vertex, v: Vertex) -> impl Iterator<Item = usize> + '_ {
        self.incidence[u as usize]
            .iter()
            .copied()
            .filter(move |&i| u != v && self.edges[i].contains(&v))
    }

    /// True iff some hyperedge contains both `u` and `v` (`u != v`).
    pub fn pair_extends(&self, u: Vertex, v: Vertex) -> bool {
        self.edges_through_pair(u, v).next().is_some()
    }

    /// The third vertices completing `{u, v}` to a hyperedge.
    pub fn completions(&self, u: Vertex, v: Vertex) -> Vec<Vertex> {
        self.edges_through_pair(u, v)
            .map(|i| {
                *self.edges[i]
                    .iter()
                    .find(|&&w| w != u && w != v)
                    .expect("edge has three distinct vertices")
            })
            .collect()
    }

    pub fn isolated_vertices(&self) -> Vec<Vertex> {
        self.vertices().filter(|&v| self.degree(v) == 0).collect()
    }

    /// Girth via shortest cycles in the vertex/edge incidence graph: a
    /// hypergraph n-cycle is a 2n-cycle there.
    pub fn girth(&self) -> Girth {
        let n = self.vertex_count();
        let total = n + self.edge_count();
        let neighbours = |node: usize| -> Vec<usize> {
            if node < n {
                self.incidence[node].iter().map(|&e| n + e).collect()
            } else {
                self.edges[node - n].iter().map(|&v| v as usize).collect()
            }
        };
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; total];
        let mut parent = vec![usize::MAX; total];
        for root in 0..n {
            if self.incidence[root].is_empty() {
                continue;
            }
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[root] = 0;
            parent[root] = usize::MAX;
            let mut queue = VecDeque::from([root]);
            while let Some(a) = queue.pop_front() {
                if 2 * dist[a] >= best {
                    break;
                }
                for b in neighbours(a) {
                    if dist[b] == usize::MAX {
                        dist[b] = dist[a] + 1;
                        parent[b] = a;
                        queue.push_back(b);
                    } else if parent[a] != b {
                        best = best.min(dist[a] + dist[b] + 1);
                    }
                }
            }
        }
        if best == usize::MAX {
            Girth::Infinite
        } else {
            Girth::Finite((best / 2) as u32)
        }
    }

    pub fn is_hyperforest(&self) -> bool {
        self.girth() == Girth::Infinite
    }

    /// Evaluates conditions (I), (II) and (III) by direct quantification.
    pub fn check_conditions(&self) -> Conditions {
        let n = self.vertex_count() as Vertex;
        let mut one = true;
        'pairs: for u in 0..n {
            for v in u + 1..n {
                if self.edges_through_pair(u, v).nth(1).is_some() {
                    one = false;
                    break 'pairs;
                }
            }
        }
        let ext = self.extension_matrix();
        let extends = |u: Vertex, v: Vertex| ext[u as usize * n as usize + v as usize];
        let mut two = true;
        'triples: for u in 0..n {
            for v in u + 1..n {
                if !extends(u, v) {
                    continue;
                }
                for w in v + 1..n {
                    if extends(u, w) && extends(v, w) && !self.is_edge(u, v, w) {
                        two = false;
                        break 'triples;
                    }
                }
            }
        }
        let mut three = true;
        'quads: for a in 0..n {
            for b in a + 1..n {
                if !extends(a, b) {
                    continue;
                }
                for c in b + 1..n {
                    if !(extends(a, c) && extends(b, c)) {
                        continue;
                    }
                    for d in c + 1..n {
                        if extends(a, d) && extends(b, d) && extends(c, d) {
                            three = false;
                            break 'quads;
                        }
                    }
                }
            }
        }
        Conditions { one, two, three }
    }

    fn extension_matrix(&self) -> Vec<bool> {
        let n = self.vertex_count();
        let mut m = vec![false; n * n];
        for e in &self.edges {
            for &a in e {
                for &b in e {
                    if a != b {
                        m[a as usize * n + b as usize] = true;
                    }
                }
            }
        }
        m
    }

    /// The pair equivalence, defined only for girth at least 3.
    pub fn pair_equivalence(&self) -> Result<PairPartition> {
        let girth = self.girth();
        if !girth.at_least(3) {
            return Err(Error::EquivalenceUndefined {
                girth: girth.to_string(),
            });
        }
        PairPartition::compute(self)
    }

    /// The hypergraph restricted to the vertices lying in some edge,
    /// renumbered in order.
    pub fn without_isolated(&self) -> Hypergraph {
        let keep: Vec<Vertex> = self.vertices().filter(|&v| self.degree(v) > 0).collect();
        let mut index = vec![u32::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            index[v as usize] = i as u32;
        }
        let names = keep
            .iter()
            .map(|&v| self.names[v as usize].clone())
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| e.map(|v| index[v as usize]))
            .collect();
        Hypergraph::new(names, edges).expect("restriction of a valid hypergraph")
    }

    /// Applies a vertex relabelling `perm` (old id to new id).
    pub fn relabel(&self, perm: &[Vertex]) -> Result<Hypergraph> {
        if perm.len() != self.vertex_count() {
            return Err(Error::InvalidParameter("permutation length".into()));
        }
        let mut names = vec![String::new(); perm.len()];
        for (old, &new) in perm.iter().enumerate() {
            names[new as usize] = self.names[old].clone();
        }
        let edges = self
            .edges
            .iter()
            .map(|e| e.map(|v| perm[v as usize]))
            .collect();
        Hypergraph::new(names, edges)
    }

    /// True iff `label` joins vertex names without ambiguity (all names are
    /// single characters).
    pub fn compact_names(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }
}

/// Identifier of an equivalence class of vertex pairs.
pub type PairClass = usize;

/// The partition of vertex pairs induced by the pair equivalence: two
/// extending pairs are equivalent when they complete to hyperedges through a
/// common vertex; all non-extending pairs form a single class.
#[derive(Clone, Debug)]
pub struct PairPartition {
    n: usize,
    class_of: Vec<PairClass>,
    classes: Vec<Vec<(Vertex, Vertex)>>,
    non_extending: Option<PairClass>,
    completion: Vec<Option<Vertex>>,
}

impl PairPartition {
    fn pair_index(n: usize, u: Vertex, v: Vertex) -> usize {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        a as usize * n + b as usize
    }

    fn compute(h: &Hypergraph) -> Result<Self> {
        let n = h.vertex_count();
        let pairs: Vec<(Vertex, Vertex)> = (0..n as Vertex)
            .flat_map(|u| (u + 1..n as Vertex).map(move |v| (u, v)))
            .collect();
        let thirds: Vec<Vec<Vertex>> = pairs.iter().map(|&(u, v)| h.completions(u, v)).collect();
        let related = |i: usize, j: usize| -> bool {
            if thirds[i].is_empty() && thirds[j].is_empty() {
                return true;
            }
            thirds[i].iter().any(|w| thirds[j].contains(w))
        };
        let mut class_of_pair = vec![usize::MAX; pairs.len()];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..pairs.len() {
            if class_of_pair[i] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let members: Vec<usize> = (i..pairs.len())
                .filter(|&j| class_of_pair[j] == usize::MAX && related(i, j))
                .collect();
            for &j in &members {
                class_of_pair[j] = id;
            }
            classes.push(members);
        }
        // the relation must be transitive for the classes to be a partition
        for members in &classes {
            for &a in members {
                for &b in members {
                    if !related(a, b) {
                        return Err(Error::Falsified(format!(
                            "pair equivalence not transitive at {:?} / {:?}",
                            pairs[a], pairs[b]
                        )));
                    }
                }
            }
        }
        let mut class_of = vec![usize::MAX; n * n];
        for (i, &(u, v)) in pairs.iter().enumerate() {
            class_of[Self::pair_index(n, u, v)] = class_of_pair[i];
        }
        let non_extending = pairs
            .iter()
            .position(|&(u, v)| !h.pair_extends(u, v))
            .map(|i| class_of_pair[i]);
        let completion = classes
            .iter()
            .map(|members| {
                let (u, v) = pairs[members[0]];
                let c = h.completions(u, v);
                (c.len() == 1).then(|| c[0])
            })
            .collect();
        Ok(PairPartition {
            n,
            class_of,
            classes: classes
                .into_iter()
                .map(|m| m.into_iter().map(|i| pairs[i]).collect())
                .collect(),
            non_extending,
            completion,
        })
    }

    pub fn class_of(&self, u: Vertex, v: Vertex) -> PairClass {
        assert_ne!(u, v, "pair equivalence is defined on 2-element sets");
        self.class_of[Self::pair_index(self.n, u, v)]
    }

    pub fn classes(&self) -> &[Vec<(Vertex, Vertex)>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn non_extending_class(&self) -> Option<PairClass> {
        self.non_extending
    }

    /// The vertex completing every pair of an extending class.
    pub fn completion(&self, class: PairClass) -> Option<Vertex> {
        self.completion[class]
    }

    /// Smallest pair of the class.
    pub fn representative(&self, class: PairClass) -> (Vertex, Vertex) {
        self.classes[class][0]
    }

    pub fn equivalent(&self, p: (Vertex, Vertex), q: (Vertex, Vertex)) -> bool {
        self.class_of(p.0, p.1) == self.class_of(q.0, q.1)
    }
}

/// `|P_{<=3}(V)| = 1 + n + C(n,2) + C(n,3)`.
pub fn small_subset_count(n: usize) -> u128 {
    let n = n as u128;
    1 + n + n * n.saturating_sub(1) / 2 + n * n.saturating_sub(1) * n.saturating_sub(2) / 6
}

/// Size and colouring data entering the wild-incomparability rule.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WildProfile {
    pub vertices: usize,
    pub girth: Girth,
    pub chromatic_number: usize,
}

impl WildProfile {
    pub fn of(h: &Hypergraph) -> Self {
        WildProfile {
            vertices: h.vertex_count(),
            girth: h.girth(),
            chromatic_number: h.chromatic_number(),
        }
    }

    fn dominates(&self, other: &WildProfile) -> bool {
        self.girth.exceeds(3 * other.vertices as u128 + 1)
            && self.chromatic_number as u128 > small_subset_count(other.vertices) + 1
    }
}

/// Both profiles have girth at least 4 and chromatic number above 5, and
/// one dominates the other in girth and chromatic number.
pub fn wild_rule(g: &WildProfile, h: &WildProfile) -> bool {
    let base = |p: &WildProfile| p.girth.at_least(4) && p.chromatic_number > 5;
    base(g) && base(h) && (g.dominates(h) || h.dominates(g))
}

pub fn wildly_incomparable(g: &Hypergraph, h: &Hypergraph) -> bool {
    // cheap rejections before any chromatic number is computed
    if !g.girth().at_least(4) || !h.girth().at_least(4) {
        return false;
    }
    if g.is_colourable(5) || h.is_colourable(5) {
        return false;
    }
    wild_rule(&WildProfile::of(g), &WildProfile::of(h))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn single_edge() -> Hypergraph {
        Hypergraph::from_edges(3, &[[0, 1, 2]]).unwrap()
    }

    #[test]
    fn rejects_malformed_edges() {
        assert!(Hypergraph::from_edges(3, &[[0, 0, 1]]).is_err());
        assert!(Hypergraph::from_edges(3, &[[0, 1, 3]]).is_err());
        assert!(Hypergraph::from_edges(3, &[[0, 1, 2], [2, 1, 0]]).is_err());
        assert!(
            Hypergraph::new(vec!["a".into(), "a".into(), "b".into()], vec![[0, 1, 2]]).is_err()
        );
    }

    #[test]
    fn girth_examples() {
        assert_eq!(single_edge().girth(), Girth::Infinite);
        let two_cycle = Hypergraph::from_edges(4, &[[0, 1, 2], [0, 1, 3]]).unwrap();
        assert_eq!(two_cycle.girth(), Girth::Finite(2));
        let triangle = Hypergraph::from_edges(6, &[[0, 1, 3], [1, 2, 4], [0, 2, 5]]).unwrap();
        assert_eq!(triangle.girth(), Girth::Finite(3));
        let disjoint = Hypergraph::from_edges(6, &[[0, 1, 2], [3, 4, 5]]).unwrap();
        assert_eq!(disjoint.girth(), Girth::Infinite);
        assert!(Girth::Infinite > Girth::Finite(1000));
    }

    #[test]
    fn conditions_examples() {
        let c = single_edge().check_conditions();
        assert_eq!(
            c,
            Conditions {
                one: true,
                two: true,
                three: true
            }
        );
        let two_cycle = Hypergraph::from_edges(4, &[[0, 1, 2], [0, 1, 3]]).unwrap();
        assert!(!two_cycle.check_conditions().one);
        let triangle = Hypergraph::from_edges(6, &[[0, 1, 3], [1, 2, 4], [0, 2, 5]]).unwrap();
        let c = triangle.check_conditions();
        assert!(c.one && !c.two);
    }

    #[test]
    fn pair_equivalence_examples() {
        let h = single_edge();
        let p = h.pair_equivalence().unwrap();
        let (a, b, c) = (p.class_of(0, 1), p.class_of(0, 2), p.class_of(1, 2));
        assert!(a != b && b != c && a != c);
        assert_eq!(p.non_extending_class(), None);

        // {u,v,w} and {x,y,w} with w = 2
        let h = Hypergraph::from_edges(5, &[[0, 1, 2], [3, 4, 2]]).unwrap();
        let p = h.pair_equivalence().unwrap();
        assert!(p.equivalent((0, 1), (3, 4)));
        assert_eq!(p.completion(p.class_of(0, 1)), Some(2));
        let ne = p.non_extending_class().unwrap();
        assert_eq!(p.class_of(0, 3), ne);
        assert_eq!(p.class_of(1, 4), ne);
        assert_eq!(p.completion(ne), None);

        let two_cycle = Hypergraph::from_edges(4, &[[0, 1, 2], [0, 1, 3]]).unwrap();
        assert!(matches!(
            two_cycle.pair_equivalence(),
            Err(Error::EquivalenceUndefined { .. })
        ));
    }

    #[test]
    fn hyperforest_examples() {
        assert!(single_edge().is_hyperforest());
        let two_cycle = Hypergraph::from_edges(4, &[[0, 1, 2], [0, 1, 3]]).unwrap();
        assert!(!two_cycle.is_hyperforest());
        let disjoint = Hypergraph::from_edges(6, &[[0, 1, 2], [3, 4, 5]]).unwrap();
        assert!(disjoint.is_hyperforest());
    }

    #[test]
    fn small_subset_counts() {
        assert_eq!(small_subset_count(0), 1);
        assert_eq!(small_subset_count(3), 1 + 3 + 3 + 1);
        assert_eq!(small_subset_count(10), 1 + 10 + 45 + 120);
    }

    #[test]
    fn wild_rule_needs_strict_domination() {
        let small = WildProfile {
            vertices: 10,
            girth: Girth::Finite(5),
            chromatic_number: 6,
        };
        let k = small_subset_count(10) as usize + 2;
        let big = WildProfile {
            vertices: 5000,
            girth: Girth::Finite(32),
            chromatic_number: k,
        };
        assert!(wild_rule(&big, &small));
        assert!(wild_rule(&small, &big));
        // girth must exceed 3|V|+1 strictly
        let edge = WildProfile {
            girth: Girth::Finite(31),
            ..big
        };
        assert!(!wild_rule(&edge, &small));
        let low_chi = WildProfile {
            chromatic_number: k - 1,
            ..big
        };
        assert!(!wild_rule(&low_chi, &small));
        assert!(!wild_rule(&small, &small));
        assert!(!wild_rule(&big, &big));
        let colourable = WildProfile {
            chromatic_number: 5,
            ..small
        };
        assert!(!wild_rule(&big, &colourable));
    }

    #[test]
    fn wild_incomparability_rejects_small_instances() {
        let h = single_edge();
        assert!(!wildly_incomparable(&h, &h));
        let fano = Hypergraph::from_edges(
            7,
            &[
                [0, 1, 2],
                [0, 3, 4],
                [0, 5, 6],
                [1, 3, 5],
                [1, 4, 6],
                [2, 3, 6],
                [2, 4, 5],
            ],
        )
        .unwrap();
        assert!(!wildly_incomparable(&fano, &h));
        assert!(!wildly_incomparable(&h, &fano));
    }
}
