use super::{Elem, FinMonoid};
use crate::error::{Error, Result};

const UNSET: Elem = Elem::MAX;
const NODE_BUDGET: u64 = 50_000_000;

struct Search<'a> {
    m: &'a FinMonoid,
    n: &'a FinMonoid,
    gens: Vec<Elem>,
    fixed: Vec<Option<Elem>>,
    injective: bool,
    nodes: u64,
}

impl Search<'_> {
    /// Extends `map` along products with the first `k + 1` generators.
    /// Returns false on a conflict.
    fn extend(&self, map: &mut [Elem], used: &mut [bool], k: usize) -> bool {
        let mut queue: Vec<Elem> = self
            .m
            .elements()
            .filter(|&x| map[x as usize] != UNSET)
            .collect();
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            i += 1;
            for &g in &self.gens[..=k] {
                let y = self.m.mul(x, g);
                let fy = self.n.mul(map[x as usize], map[g as usize]);
                if map[y as usize] == UNSET {
                    if self.injective && used[fy as usize] {
                        return false;
                    }
                    map[y as usize] = fy;
                    used[fy as usize] = true;
                    queue.push(y);
                } else if map[y as usize] != fy {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self, k: usize, map: &[Elem], used: &[bool]) -> Result<Option<Vec<Elem>>> {
        if k == self.gens.len() {
            return Ok(self.verify(map).then(|| map.to_vec()));
        }
        let g = self.gens[k];
        let candidates: Vec<Elem> = match self.fixed[k] {
            Some(c) => vec![c],
            None => self.n.elements().collect(),
        };
        let sig = self.injective.then(|| self.m.power_signature(g));
        for c in candidates {
            self.nodes += 1;
            if self.nodes > NODE_BUDGET {
                return Err(Error::Budget {
                    what: "homomorphism search",
                    needed: self.nodes as u128,
                    budget: NODE_BUDGET as u128,
                    hint: "; add generator constraints",
                });
            }
            if sig.is_some_and(|s| self.n.power_signature(c) != s) {
                continue;
            }
            let mut next = map.to_vec();
            let mut next_used = used.to_vec();
            if next[g as usize] == UNSET {
                if self.injective && next_used[c as usize] {
                    continue;
                }
                next[g as usize] = c;
                next_used[c as usize] = true;
            } else if next[g as usize] != c {
                continue;
            }
            if !self.extend(&mut next, &mut next_used, k) {
                continue;
            }
            if let Some(found) = self.run(k + 1, &next, &next_used)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }

    fn verify(&self, map: &[Elem]) -> bool {
        if map.iter().any(|&x| x == UNSET) || map[self.m.identity() as usize] != self.n.identity() {
            return false;
        }
        self.m.elements().all(|a| {
            self.m.elements().all(|b| {
                map[self.m.mul(a, b) as usize] == self.n.mul(map[a as usize], map[b as usize])
            })
        })
    }
}

fn search(
    m: &FinMonoid,
    n: &FinMonoid,
    constraints: &[(Elem, Elem)],
    injective: bool,
) -> Result<Option<Vec<Elem>>> {
    for &(a, b) in constraints {
        if a as usize >= m.size() || b as usize >= n.size() {
            return Err(Error::InvalidParameter(format!(
                "constraint {a} -> {b} out of range"
            )));
        }
    }
    // constrained elements first, then enough others to generate
    let mut gens: Vec<Elem> = Vec::new();
    let mut fixed = Vec::new();
    for &(a, b) in constraints {
        if let Some(i) = gens.iter().position(|&g| g == a) {
            if fixed[i] != Some(b) {
                return Ok(None);
            }
            continue;
        }
        gens.push(a);
        fixed.push(Some(b));
    }
    let mut reached = vec![false; m.size()];
    for x in m.closure(&gens) {
        reached[x as usize] = true;
    }
    for g in m.generating_set() {
        if !reached[g as usize] {
            gens.push(g);
            fixed.push(None);
            for x in m.closure(&gens) {
                reached[x as usize] = true;
            }
        }
    }
    let mut map = vec![UNSET; m.size()];
    let mut used = vec![false; n.size()];
    map[m.identity() as usize] = n.identity();
    used[n.identity() as usize] = true;
    let mut s = Search {
        m,
        n,
        gens,
        fixed,
        injective,
        nodes: 0,
    };
    if s.gens.is_empty() {
        return Ok(s.verify(&map).then_some(map));
    }
    s.run(0, &map, &used)
}

/// A monoid homomorphism `M → N` extending `constraints`, as the image of
/// each element of `M`.
pub fn find_homomorphism(
    m: &FinMonoid,
    n: &FinMonoid,
    constraints: &[(Elem, Elem)],
) -> Result<Option<Vec<Elem>>> {
    search(m, n, constraints, false)
}

pub fn find_isomorphism(m: &FinMonoid, n: &FinMonoid) -> Result<Option<Vec<Elem>>> {
    find_isomorphism_with(m, n, &[])
}

/// An isomorphism `M → N` extending `constraints`.
pub fn find_isomorphism_with(
    m: &FinMonoid,
    n: &FinMonoid,
    constraints: &[(Elem, Elem)],
) -> Result<Option<Vec<Elem>>> {
    if m.size() != n.size() || m.idempotents().len() != n.idempotents().len() {
        return Ok(None);
    }
    search(m, n, constraints, true)
}
