use serde::{Deserialize, Serialize};

use super::{Hypergraph, Vertex};

/// A map from vertices to colour indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Colouring(pub Vec<u8>);

impl Colouring {
    pub fn get(&self, v: Vertex) -> u8 {
        self.0[v as usize]
    }

    /// No edge monochromatic.
    pub fn is_proper(&self, h: &Hypergraph) -> bool {
        h.edges().iter().all(|e| {
            let c = self.get(e[0]);
            e.iter().any(|&v| self.get(v) != c)
        })
    }

    /// Every edge gets exactly one 0 and two 1s.
    pub fn is_majority(&self, h: &Hypergraph) -> bool {
        self.0.iter().all(|&c| c <= 1)
            && h.edges()
                .iter()
                .all(|e| e.iter().filter(|&&v| self.get(v) == 0).count() == 1)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MajorityMode {
    Exists,
    Enumerate,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MajorityResult {
    Exists(bool),
    All(Vec<Colouring>),
}

impl Hypergraph {
    fn degree_order(&self) -> Vec<Vertex> {
        let mut order: Vec<Vertex> = self.vertices().collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.degree(v)), v));
        order
    }

    /// Proper colouring with at most `k` colours, if one exists.
    pub fn find_colouring(&self, k: usize) -> Option<Colouring> {
        let n = self.vertex_count();
        if n == 0 {
            return Some(Colouring(Vec::new()));
        }
        if k == 0 {
            return None;
        }
        let order = self.degree_order();
        let mut colour = vec![u8::MAX; n];
        let k = k.min(n).min(u8::MAX as usize);
        if self.colour_rec(&order, 0, 0, k, &mut colour) {
            Some(Colouring(colour))
        } else {
            None
        }
    }

    fn colour_rec(
        &self,
        order: &[Vertex],
        pos: usize,
        used: usize,
        k: usize,
        colour: &mut Vec<u8>,
    ) -> bool {
        let Some(&v) = order.get(pos) else {
            return true;
        };
        // colour classes are introduced in order, so a new class is only
        // ever the next unused index
        for c in 0..k.min(used + 1) {
            colour[v as usize] = c as u8;
            let ok = self.edges_at(v).iter().all(|&e| {
                let e = self.edges()[e];
                e.iter().any(|&w| colour[w as usize] != c as u8)
            });
            if ok && self.colour_rec(order, pos + 1, used.max(c + 1), k, colour) {
                return true;
            }
        }
        colour[v as usize] = u8::MAX;
        false
    }

    pub fn is_colourable(&self, k: usize) -> bool {
        self.find_colouring(k).is_some()
    }

    /// Least number of colours in a proper colouring (1 for edgeless
    /// hypergraphs).
    pub fn chromatic_number(&self) -> usize {
        (1..)
            .find(|&k| self.is_colourable(k))
            .expect("every hypergraph is colourable with |V| colours")
    }

    /// All majority 2-colourings in lexicographic order of the colour
    /// vector, or just whether one exists.
    pub fn majority_colourings_mode(&self, mode: MajorityMode) -> MajorityResult {
        let mut out = Vec::new();
        let mut colour = vec![u8::MAX; self.vertex_count()];
        let stop_early = mode == MajorityMode::Exists;
        self.majority_rec(0, &mut colour, &mut out, stop_early);
        match mode {
            MajorityMode::Exists => MajorityResult::Exists(!out.is_empty()),
            MajorityMode::Enumerate => MajorityResult::All(out),
        }
    }

    pub fn majority_colourings(&self) -> Vec<Colouring> {
        match self.majority_colourings_mode(MajorityMode::Enumerate) {
            MajorityResult::All(v) => v,
            MajorityResult::Exists(_) => unreachable!(),
        }
    }

    pub fn has_majority_colouring(&self) -> bool {
        matches!(
            self.majority_colourings_mode(MajorityMode::Exists),
            MajorityResult::Exists(true)
        )
    }

    fn majority_rec(
        &self,
        v: usize,
        colour: &mut Vec<u8>,
        out: &mut Vec<Colouring>,
        stop: bool,
    ) -> bool {
        if v == colour.len() {
            out.push(Colouring(colour.clone()));
            return stop;
        }
        for c in [0u8, 1] {
            colour[v] = c;
            let ok = self.edges_at(v as Vertex).iter().all(|&e| {
                let e = self.edges()[e];
                let zeros = e.iter().filter(|&&w| colour[w as usize] == 0).count();
                let ones = e.iter().filter(|&&w| colour[w as usize] == 1).count();
                zeros <= 1 && ones <= 2
            });
            if ok && self.majority_rec(v + 1, colour, out, stop) {
                colour[v] = u8::MAX;
                return true;
            }
        }
        colour[v] = u8::MAX;
        false
    }

    /// The two hypotheses of the flexible-colouring criterion for
    /// membership of the hypergraph monoid in the variety of the Brandt
    /// monoid:
    /// 1. every pair `u != v` takes colour pairs (1,1), (0,1) and (1,0)
    ///    across majority 2-colourings;
    /// 2. every pair not extending to a hyperedge also takes (0,0).
    pub fn flex_conditions(&self) -> bool {
        let colourings = self.majority_colourings();
        if colourings.is_empty() {
            return false;
        }
        let n = self.vertex_count();
        for u in 0..n as Vertex {
            for v in 0..n as Vertex {
                if u == v {
                    continue;
                }
                let mut seen = [[false; 2]; 2];
                for c in &colourings {
                    seen[c.get(u) as usize][c.get(v) as usize] = true;
                }
                if !(seen[1][1] && seen[0][1] && seen[1][0]) {
                    return false;
                }
                if !self.pair_extends(u, v) && !seen[0][0] {
                    return false;
                }
            }
        }
        true
    }
}
