use super::{Elem, FinMonoid};
use crate::error::{Error, Result};
use crate::words::{zimin, Letter, Word};

/// Largest `n` accepted by [`zimin_monoid`]; `M(z_7)` already has 21847
/// elements and a 1.9 GB table.
pub const ZIMIN_MAX_N: u32 = 6;

/// `M(z_n)` together with the factor behind each element.
#[derive(Clone, Debug)]
pub struct ZiminMonoid {
    pub n: u32,
    pub monoid: FinMonoid,
    /// `factors[i]` is the word of element `i`; element 0 is the zero and
    /// element 1 the identity (empty word).
    pub factors: Vec<Word>,
}

impl ZiminMonoid {
    pub const ZERO: Elem = 0;
    pub const ONE: Elem = 1;

    /// Element of a nonempty factor of `z_n`.
    pub fn element(&self, w: &Word) -> Option<Elem> {
        if w.is_empty() {
            return Some(Self::ONE);
        }
        self.factors[2..]
            .binary_search_by(|f| f.shortlex_cmp(w))
            .ok()
            .map(|i| (i + 2) as Elem)
    }

    /// The element for a single letter `x_i`.
    pub fn letter(&self, i: u32) -> Option<Elem> {
        self.element(&Word::new(vec![Letter::x(i)]))
    }
}

/// The factor monoid of `z_n`: distinct nonempty factors with 0 and an
/// adjoined 1, where `u·v = uv` if `uv` is a factor of `z_n` and 0
/// otherwise.
pub fn zimin_monoid(n: u32) -> Result<ZiminMonoid> {
    if n > ZIMIN_MAX_N {
        return Err(Error::InvalidParameter(format!(
            "M(z_{n}) is too large; n must be at most {ZIMIN_MAX_N}"
        )));
    }
    let z = zimin(n);
    let width = n as usize + 1;
    // suffix trie: node 0 is the empty word, every other node one factor
    let mut parent = vec![u32::MAX];
    let mut last = vec![Letter(0)];
    let mut children = vec![u32::MAX; width];
    let letters = z.letters();
    for start in 0..letters.len() {
        let mut node = 0usize;
        for l in &letters[start..] {
            let slot = node * width + l.id() as usize;
            if children[slot] == u32::MAX {
                children[slot] = parent.len() as u32;
                parent.push(node as u32);
                last.push(*l);
                children.extend(std::iter::repeat(u32::MAX).take(width));
            }
            node = children[slot] as usize;
        }
    }
    let nodes = parent.len();
    let word_of = |mut v: usize| {
        let mut ls = Vec::new();
        while v != 0 {
            ls.push(last[v]);
            v = parent[v] as usize;
        }
        ls.reverse();
        Word::new(ls)
    };
    let words: Vec<Word> = (0..nodes).map(word_of).collect();
    let mut order: Vec<usize> = (1..nodes).collect();
    order.sort_by(|&a, &b| words[a].shortlex_cmp(&words[b]));
    // element ids: 0 zero, 1 identity (node 0), then sorted factors
    let mut elem_of_node = vec![0 as Elem; nodes];
    elem_of_node[0] = 1;
    for (i, &v) in order.iter().enumerate() {
        elem_of_node[v] = (i + 2) as Elem;
    }
    let size = nodes + 1;
    let mut table = vec![0 as Elem; size * size];
    // prod[v] = node of u·v, u fixed; parents precede children in `order`
    let mut prod = vec![u32::MAX; nodes];
    for u in 0..nodes {
        prod[0] = u as u32;
        for &v in &order {
            let p = prod[parent[v] as usize];
            prod[v] = if p == u32::MAX {
                u32::MAX
            } else {
                children[p as usize * width + last[v].id() as usize]
            };
        }
        let row = elem_of_node[u] as usize * size;
        for v in 0..nodes {
            let e = prod[v];
            table[row + elem_of_node[v] as usize] = if e == u32::MAX {
                0
            } else {
                elem_of_node[e as usize]
            };
        }
    }
    let mut factors = vec![Word::empty(), Word::empty()];
    factors.extend(order.iter().map(|&v| words[v].clone()));
    let mut labels = vec!["0".to_string(), "1".to_string()];
    labels.extend(
        factors[2..]
            .iter()
            .map(|w| w.iter().map(|l| l.to_string()).collect::<String>()),
    );
    let gens: Vec<Elem> = (0..=n)
        .map(|i| {
            let slot = Letter::x(i).id() as usize;
            elem_of_node[children[slot] as usize]
        })
        .collect();
    let monoid = FinMonoid::from_flat(size, table, 1, Some(labels), Some(&gens))?;
    Ok(ZiminMonoid { n, monoid, factors })
}
