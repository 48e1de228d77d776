//! Finite monoids given by multiplication tables.

mod identity;
mod isoterm;
mod morphism;
mod power;
mod zimin;

use std::collections::VecDeque;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use identity::{
    evaluate, satisfies, satisfies_with, Assignment, Identity, SatisfyOptions, Strategy, Verdict,
};
pub(crate) use isoterm::Battery;
pub use isoterm::{isoterm_search, IsotermOptions, IsotermResult};
pub use morphism::{find_homomorphism, find_isomorphism, find_isomorphism_with};
pub use power::{direct_power, PowerClosure, PowerOptions};
pub use zimin::{zimin_monoid, ZiminMonoid, ZIMIN_MAX_N};

/// Element index.
pub type Elem = u32;

/// Full associativity is checked up to this size; larger tables use
/// Light's test over a generating set.
const CUBIC_CHECK_LIMIT: usize = 128;

/// A finite monoid on `0..size` with a full multiplication table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinMonoid {
    size: usize,
    table: Vec<Elem>,
    identity: Elem,
    zero: Option<Elem>,
    labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct MonoidJson {
    size: usize,
    identity: Elem,
    zero: Option<Elem>,
    labels: Vec<String>,
    table: Vec<Vec<Elem>>,
}

impl FinMonoid {
    /// Validates a table (range, identity laws, associativity) and detects
    /// the zero.
    pub fn from_rows(
        rows: Vec<Vec<Elem>>,
        identity: Elem,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::NotAMonoid("table is not square".into()));
        }
        let table = rows.into_iter().flatten().collect();
        Self::from_flat(size, table, identity, labels, None)
    }

    /// As [`FinMonoid::from_rows`] with a row-major flat table. When the
    /// caller knows a generating set it is used for the associativity test.
    pub(crate) fn from_flat(
        size: usize,
        table: Vec<Elem>,
        identity: Elem,
        labels: Option<Vec<String>>,
        generators: Option<&[Elem]>,
    ) -> Result<Self> {
        if size == 0 {
            return Err(Error::NotAMonoid("empty table".into()));
        }
        if table.len() != size * size {
            return Err(Error::NotAMonoid("table is not square".into()));
        }
        if let Some(&bad) = table.iter().find(|&&x| x as usize >= size) {
            return Err(Error::NotAMonoid(format!(
                "entry {bad} out of range 0..{size}"
            )));
        }
        if identity as usize >= size {
            return Err(Error::NotAMonoid(format!(
                "identity {identity} out of range"
            )));
        }
        let labels = match labels {
            Some(l) if l.len() != size => {
                return Err(Error::NotAMonoid(format!(
                    "{} labels for {size} elements",
                    l.len()
                )))
            }
            Some(l) => l,
            None => (0..size).map(|i| i.to_string()).collect(),
        };
        let mut m = FinMonoid {
            size,
            table,
            identity,
            zero: None,
            labels,
        };
        for a in m.elements() {
            if m.mul(identity, a) != a || m.mul(a, identity) != a {
                return Err(Error::NotAMonoid(format!(
                    "{} is not a two-sided identity (fails at {})",
                    m.label(identity),
                    m.label(a)
                )));
            }
        }
        match generators {
            Some(g) => m.check_associative_light(g)?,
            None if size <= CUBIC_CHECK_LIMIT => m.check_associative_full()?,
            None => {
                let g = m.generating_set();
                m.check_associative_light(&g)?
            }
        }
        m.zero = m.find_zero();
        Ok(m)
    }

    fn check_associative_full(&self) -> Result<()> {
        for a in self.elements() {
            for b in self.elements() {
                let ab = self.mul(a, b);
                for c in self.elements() {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(self.assoc_error(a, b, c));
                    }
                }
            }
        }
        Ok(())
    }

    /// Light's test: with `gens` generating the monoid, associativity holds
    /// iff `(x g) y = x (g y)` for all `x`, `y` and generators `g`.
    fn check_associative_light(&self, gens: &[Elem]) -> Result<()> {
        if self.closure(gens).len() != self.size {
            return Err(Error::NotAMonoid(
                "associativity test given a non-generating set".into(),
            ));
        }
        for &g in gens {
            for x in self.elements() {
                let xg = self.mul(x, g);
                let row = &self.table[xg as usize * self.size..][..self.size];
                for y in self.elements() {
                    if row[y as usize] != self.mul(x, self.mul(g, y)) {
                        return Err(self.assoc_error(x, g, y));
                    }
                }
            }
        }
        Ok(())
    }

    fn assoc_error(&self, a: Elem, b: Elem, c: Elem) -> Error {
        Error::NotAMonoid(format!(
            "associativity fails at ({}, {}, {})",
            self.label(a),
            self.label(b),
            self.label(c)
        ))
    }

    fn find_zero(&self) -> Option<Elem> {
        if self.size < 2 {
            return None;
        }
        self.elements().find(|&z| {
            self.elements()
                .all(|a| self.mul(z, a) == z && self.mul(a, z) == z)
        })
    }

    /// A generating set chosen greedily in index order.
    pub fn generating_set(&self) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut reached = vec![false; self.size];
        reached[self.identity as usize] = true;
        let mut members = vec![self.identity];
        for g in self.elements() {
            if reached[g as usize] {
                continue;
            }
            gens.push(g);
            // extend the left-to-right closure by the new generator
            let mut queue: VecDeque<Elem> = members.iter().copied().collect();
            while let Some(x) = queue.pop_front() {
                for &h in &gens {
                    let y = self.mul(x, h);
                    if !reached[y as usize] {
                        reached[y as usize] = true;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
        }
        gens
    }

    /// Elements reachable from the identity by right multiplication with
    /// `gens`, in discovery order.
    pub fn closure(&self, gens: &[Elem]) -> Vec<Elem> {
        let mut seen = vec![false; self.size];
        seen[self.identity as usize] = true;
        let mut order = vec![self.identity];
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            i += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    order.push(y);
                }
            }
        }
        order
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    pub fn zero(&self) -> Option<Elem> {
        self.zero
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.size as Elem
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a as usize * self.size + b as usize]
    }

    /// Product of a sequence, left to right; the empty product is 1.
    pub fn product(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        xs.into_iter()
            .fold(self.identity, |acc, x| self.mul(acc, x))
    }

    pub fn pow(&self, a: Elem, k: usize) -> Elem {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn label(&self, a: Elem) -> &str {
        &self.labels[a as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn find_label(&self, label: &str) -> Option<Elem> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| i as Elem)
    }

    pub fn rows(&self) -> Vec<Vec<Elem>> {
        self.table.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::InvalidParameter(format!(
                "{} labels for {} elements",
                labels.len(),
                self.size
            )));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn idempotents(&self) -> Vec<Elem> {
        self.elements().filter(|&e| self.mul(e, e) == e).collect()
    }

    pub fn is_idempotent(&self, e: Elem) -> bool {
        self.mul(e, e) == e
    }

    /// Smallest `(index, period)` with `a^(index+period) = a^index`.
    pub fn power_signature(&self, a: Elem) -> (usize, usize) {
        let mut seen = vec![usize::MAX; self.size];
        let mut x = a;
        let mut k = 1;
        loop {
            if seen[x as usize] != usize::MAX {
                let first = seen[x as usize];
                return (first, k - first);
            }
            seen[x as usize] = k;
            x = self.mul(x, a);
            k += 1;
        }
    }

    /// The submonoid generated by `gens`, with its inclusion map (new index
    /// to old index).
    pub fn submonoid(&self, gens: &[Elem]) -> (FinMonoid, Vec<Elem>) {
        let mut members = self.closure(gens);
        members.sort_unstable();
        let mut index = vec![Elem::MAX; self.size];
        for (i, &x) in members.iter().enumerate() {
            index[x as usize] = i as Elem;
        }
        let n = members.len();
        let mut table = Vec::with_capacity(n * n);
        for &a in &members {
            for &b in &members {
                table.push(index[self.mul(a, b) as usize]);
            }
        }
        let labels = members
            .iter()
            .map(|&x| self.labels[x as usize].clone())
            .collect();
        let new_gens: Vec<Elem> = gens.iter().map(|&g| index[g as usize]).collect();
        let sub = FinMonoid::from_flat(
            n,
            table,
            index[self.identity as usize],
            Some(labels),
            Some(&new_gens),
        )
        .expect("a submonoid of a monoid is a monoid");
        (sub, members)
    }

    /// Collapses a two-sided ideal to a single zero. Returns the quotient and
    /// the map from old to new indices.
    pub fn rees_quotient(&self, ideal: &[Elem]) -> Result<(FinMonoid, Vec<Elem>)> {
        let mut in_ideal = vec![false; self.size];
        for &i in ideal {
            if i as usize >= self.size {
                return Err(Error::InvalidParameter(format!("element {i} out of range")));
            }
            in_ideal[i as usize] = true;
        }
        if in_ideal[self.identity as usize] {
            return Err(Error::InvalidParameter(
                "ideal contains the identity".into(),
            ));
        }
        for i in self.elements().filter(|&i| in_ideal[i as usize]) {
            for a in self.elements() {
                for (l, r) in [(a, i), (i, a)] {
                    let p = self.mul(l, r);
                    if !in_ideal[p as usize] {
                        return Err(Error::NotAnIdeal {
                            left: l as usize,
                            right: r as usize,
                            product: p as usize,
                        });
                    }
                }
            }
        }
        if ideal.is_empty() {
            return Ok((self.clone(), self.elements().collect()));
        }
        let kept: Vec<Elem> = self.elements().filter(|&a| !in_ideal[a as usize]).collect();
        let zero = kept.len() as Elem;
        let mut map = vec![zero; self.size];
        for (i, &a) in kept.iter().enumerate() {
            map[a as usize] = i as Elem;
        }
        let n = kept.len() + 1;
        let mut table = vec![zero; n * n];
        for (i, &a) in kept.iter().enumerate() {
            for (j, &b) in kept.iter().enumerate() {
                table[i * n + j] = map[self.mul(a, b) as usize];
            }
        }
        let mut labels: Vec<String> = kept
            .iter()
            .map(|&a| self.labels[a as usize].clone())
            .collect();
        labels.push("0".into());
        let q = FinMonoid::from_flat(n, table, map[self.identity as usize], Some(labels), None)?;
        Ok((q, map))
    }

    /// The one-element monoid.
    pub fn trivial() -> FinMonoid {
        FinMonoid::from_flat(1, vec![0], 0, Some(vec!["1".into()]), None).expect("trivial monoid")
    }

    pub fn to_json(&self) -> String {
        let j = MonoidJson {
            size: self.size,
            identity: self.identity,
            zero: self.zero,
            labels: self.labels.clone(),
            table: self.rows(),
        };
        serde_json::to_string(&j).expect("monoid serializes")
    }

    /// Parses and validates the JSON table format. A stated zero must be
    /// the detected one.
    pub fn from_json(text: &str) -> Result<FinMonoid> {
        let j: MonoidJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("monoid JSON: {e}")))?;
        if j.table.len() != j.size {
            return Err(Error::NotAMonoid(format!(
                "size {} but table has {} rows",
                j.size,
                j.table.len()
            )));
        }
        let m = FinMonoid::from_rows(j.table, j.identity, Some(j.labels))?;
        if j.zero != m.zero {
            return Err(Error::NotAMonoid(format!(
                "declared zero {:?} but detected {:?}",
                j.zero, m.zero
            )));
        }
        Ok(m)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<FinMonoid> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Builds `{0, 1} ∪ {(i,j) : i,j ∈ {1,2}}` with `(i,j)(k,l) = (i,l)` when
/// `nonzero(j, k)` holds and `0` otherwise. `names[(i-1)*2 + (j-1)]`
/// labels `(i,j)`.
fn rees_matrix_monoid(
    nonzero: impl Fn(usize, usize) -> bool,
    names: [&str; 4],
    order: [usize; 4],
) -> FinMonoid {
    // element 0 is zero, 1 is identity, 2.. follow `order` over the cells
    let cell_of = |e: usize| -> (usize, usize) {
        let c = order[e - 2];
        (c / 2 + 1, c % 2 + 1)
    };
    let elem_of = |i: usize, j: usize| -> Elem {
        let c = (i - 1) * 2 + (j - 1);
        (order.iter().position(|&o| o == c).expect("cell listed") + 2) as Elem
    };
    let mut rows = vec![vec![0; 6]; 6];
    for a in 0..6 {
        for b in 0..6 {
            rows[a][b] = match (a, b) {
                (0, _) | (_, 0) => 0,
                (1, x) => x as Elem,
                (x, 1) => x as Elem,
                _ => {
                    let (i, j) = cell_of(a);
                    let (k, l) = cell_of(b);
                    if nonzero(j, k) {
                        elem_of(i, l)
                    } else {
                        0
                    }
                }
            };
        }
    }
    let mut labels = vec!["0".to_string(), "1".to_string()];
    labels.extend(order.iter().map(|&c| names[c].to_string()));
    FinMonoid::from_rows(rows, 1, Some(labels)).expect("Rees matrix monoids are monoids")
}

/// B₂¹ with elements `0, 1, a, b, ab, ba` in that order.
pub fn brandt_b21() -> FinMonoid {
    // a = (1,2), b = (2,1), ab = (1,1), ba = (2,2)
    rees_matrix_monoid(|j, k| j == k, ["ab", "a", "b", "ba"], [1, 2, 0, 3])
}

/// A₂¹ with elements `0, 1, c, d, cd, dc` in that order.
pub fn brandt_a21() -> FinMonoid {
    // c = (1,1), d = (2,2), cd = (1,2), dc = (2,1); only (.,1)(1,.) vanishes
    rees_matrix_monoid(
        |j, k| !(j == 1 && k == 1),
        ["c", "cd", "dc", "d"],
        [0, 3, 1, 2],
    )
}
