use std::collections::HashMap;

use super::{Elem, FinMonoid};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct PowerOptions {
    /// Maximum number of distinct tuples before giving up.
    pub element_cap: usize,
    /// Tuples with a coordinate equal to the base zero are merged into one
    /// zero element, so the result is the Rees quotient by that ideal.
    pub collapse_zero_coordinates: bool,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions {
            element_cap: 1_000_000,
            collapse_zero_coordinates: false,
        }
    }
}

/// A submonoid of a direct power `M^N` given by generating tuples.
#[derive(Clone, Debug)]
pub struct PowerClosure {
    pub monoid: FinMonoid,
    /// The tuple of each element; `None` for the collapsed zero.
    pub tuples: Vec<Option<Vec<Elem>>>,
    /// Index of each generating tuple in `monoid`.
    pub generators: Vec<Elem>,
    /// Index of the collapsed zero, when collapsing was requested.
    pub collapsed_zero: Option<Elem>,
}

impl PowerClosure {
    pub fn coords(&self) -> usize {
        self.tuples.iter().flatten().next().map_or(0, Vec::len)
    }
}

fn tuple_product(m: &FinMonoid, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    a.iter().zip(b).map(|(&x, &y)| m.mul(x, y)).collect()
}

/// Closes `gens` inside `base^coords` under coordinatewise multiplication.
/// Element 0 of the result is the identity tuple; the collapsed zero, if
/// any, is the last element.
pub fn direct_power(
    base: &FinMonoid,
    coords: usize,
    gens: &[Vec<Elem>],
    options: PowerOptions,
) -> Result<PowerClosure> {
    if coords == 0 {
        return Err(Error::InvalidParameter(
            "direct power needs at least one coordinate".into(),
        ));
    }
    for g in gens {
        if g.len() != coords || g.iter().any(|&x| x as usize >= base.size()) {
            return Err(Error::InvalidParameter(format!(
                "generator tuple {g:?} is not in the {coords}-fold power"
            )));
        }
    }
    let zero = if options.collapse_zero_coordinates {
        Some(base.zero().ok_or_else(|| {
            Error::InvalidParameter(
                "collapsing zero coordinates needs a base monoid with zero".into(),
            )
        })?)
    } else {
        None
    };
    let is_dead = |t: &[Elem]| zero.is_some_and(|z| t.contains(&z));

    let identity = vec![base.identity(); coords];
    let mut tuples: Vec<Vec<Elem>> = vec![identity.clone()];
    let mut index: HashMap<Vec<Elem>, Elem> = HashMap::from([(identity, 0)]);
    let mut gen_index: Vec<Option<Elem>> = Vec::with_capacity(gens.len());
    // generators first so their indices are stable
    for g in gens {
        if is_dead(g) {
            gen_index.push(None);
            continue;
        }
        let next = tuples.len() as Elem;
        let id = *index.entry(g.clone()).or_insert_with(|| {
            tuples.push(g.clone());
            next
        });
        gen_index.push(Some(id));
    }
    let live_gens: Vec<Vec<Elem>> = gens.iter().filter(|g| !is_dead(g)).cloned().collect();
    let mut saw_dead = gen_index.iter().any(Option::is_none);
    let mut i = 0;
    while i < tuples.len() {
        for g in &live_gens {
            let t = tuple_product(base, &tuples[i], g);
            if is_dead(&t) {
                saw_dead = true;
                continue;
            }
            if !index.contains_key(&t) {
                if tuples.len() >= options.element_cap {
                    return Err(Error::Budget {
                        what: "direct power closure",
                        needed: tuples.len() as u128 + 1,
                        budget: options.element_cap as u128,
                        hint: "; raise the element budget",
                    });
                }
                index.insert(t.clone(), tuples.len() as Elem);
                tuples.push(t);
            }
        }
        i += 1;
    }

    let live = tuples.len();
    let collapsed = (zero.is_some() && saw_dead).then_some(live as Elem);
    let n = live + usize::from(collapsed.is_some());
    let mut table = vec![0 as Elem; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = if a == live || b == live {
                live as Elem
            } else {
                let t = tuple_product(base, &tuples[a], &tuples[b]);
                if is_dead(&t) {
                    match collapsed {
                        Some(z) => z,
                        None => {
                            return Err(Error::Falsified(
                                "dead product without a collapsed zero".into(),
                            ))
                        }
                    }
                } else {
                    *index.get(&t).ok_or_else(|| {
                        Error::Falsified("closure is not closed under multiplication".into())
                    })?
                }
            };
        }
    }
    let label = |t: &[Elem]| {
        let parts: Vec<&str> = t.iter().map(|&x| base.label(x)).collect();
        format!("({})", parts.join(","))
    };
    let mut labels: Vec<String> = tuples.iter().map(|t| label(t)).collect();
    if collapsed.is_some() {
        labels.push("0".into());
    }
    let generators: Vec<Elem> = gen_index
        .iter()
        .map(|g| {
            g.or(collapsed)
                .expect("dead generators imply a collapsed zero")
        })
        .collect();
    let monoid = FinMonoid::from_flat(n, table, 0, Some(labels), Some(&generators))?;
    let mut tuple_list: Vec<Option<Vec<Elem>>> = tuples.into_iter().map(Some).collect();
    if collapsed.is_some() {
        tuple_list.push(None);
    }
    Ok(PowerClosure {
        monoid,
        tuples: tuple_list,
        generators,
        collapsed_zero: collapsed,
    })
}
