use serde::{Deserialize, Serialize};

use super::{build, HGMonoid, Variant};
use crate::error::{Error, Result};
use crate::finmon::{
    brandt_a21, brandt_b21, direct_power, find_homomorphism, find_isomorphism_with, Elem,
    FinMonoid, PowerOptions,
};
use crate::hypergraph::{Colouring, Hypergraph, Vertex};

// element indices in brandt_b21 / brandt_a21
const ONE: Elem = 1;
const A: Elem = 2;
const B: Elem = 3;
const C: Elem = 2;
const D: Elem = 3;

#[derive(Clone, Copy, Debug)]
pub struct WitnessOptions {
    pub max_coords: usize,
    pub element_cap: usize,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions {
            max_coords: 64,
            element_cap: 100_000,
        }
    }
}

/// Properties (1)-(5) of the presentation checked on the hat generators
/// modulo the zero-coordinate ideal.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct HatLaws {
    pub rule1: bool,
    pub rule2: bool,
    pub rule3: bool,
    pub rule4: bool,
    pub rule5: bool,
}

impl HatLaws {
    pub fn all(&self) -> bool {
        self.rule1 && self.rule2 && self.rule3 && self.rule4 && self.rule5
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct A21Witness {
    pub coords: A21Coords,
    /// Size of the closure `T`, or `None` when the ideal was collapsed
    /// during closure.
    pub closure_size: Option<usize>,
    pub quotient_size: usize,
    pub natural_size: usize,
    pub hat_laws: HatLaws,
    /// `T/I ≅ M_H^♮` with `t̂ ↦ t`, `û ↦ u`.
    pub natural_isomorphic: bool,
    /// `M_H^♮ → T/I` extending `t ↦ t̂`, `u ↦ û` exists.
    pub natural_onto: bool,
    /// First variant, in natural, sharp, full order, isomorphic to `T/I`
    /// under the generator correspondence.
    pub isomorphic_to: Option<Variant>,
    /// `T/I → M_H` extending `t̂ ↦ t`, `û ↦ u` exists.
    pub full_image: bool,
    /// Hat generator tuple label and its image in `M_H`.
    pub generator_images: Vec<(String, String)>,
    pub verified: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum WitnessStatus {
    Verified,
    Refused { reason: String },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct B21Witness {
    pub status: WitnessStatus,
    pub colourings: Vec<Colouring>,
    pub closure_size: Option<usize>,
    pub quotient_size: Option<usize>,
    pub target_size: Option<usize>,
    pub hat_laws: Option<HatLaws>,
    pub generator_images: Vec<(String, String)>,
}

/// `T/I` for the submonoid `T` of `base^coords` generated by `gens`.
/// Returns the quotient, generator indices in it and `|T|` when known.
fn close_and_quotient(
    base: &FinMonoid,
    coords: usize,
    gens: &[Vec<Elem>],
    options: WitnessOptions,
) -> Result<(FinMonoid, Vec<Elem>, Option<usize>)> {
    if coords > options.max_coords {
        return Err(Error::Budget {
            what: "witness coordinates",
            needed: coords as u128,
            budget: options.max_coords as u128,
            hint: "",
        });
    }
    let full = direct_power(
        base,
        coords,
        gens,
        PowerOptions {
            element_cap: options.element_cap,
            collapse_zero_coordinates: false,
        },
    );
    match full {
        Ok(t) => {
            let zero = base.zero().expect("Brandt monoids have a zero");
            let ideal: Vec<Elem> = t
                .monoid
                .elements()
                .filter(|&x| {
                    t.tuples[x as usize]
                        .as_ref()
                        .is_some_and(|tp| tp.contains(&zero))
                })
                .collect();
            let (q, map) = t.monoid.rees_quotient(&ideal)?;
            let g = t.generators.iter().map(|&x| map[x as usize]).collect();
            Ok((q, g, Some(t.monoid.size())))
        }
        Err(Error::Budget { .. }) => {
            let t = direct_power(
                base,
                coords,
                gens,
                PowerOptions {
                    element_cap: options.element_cap,
                    collapse_zero_coordinates: true,
                },
            )?;
            let zero = t.collapsed_zero;
            let mut g = Vec::with_capacity(gens.len());
            for (i, gen) in gens.iter().enumerate() {
                let idx = t
                    .monoid
                    .elements()
                    .find(|&x| t.tuples[x as usize].as_ref() == Some(gen));
                match idx.or(zero) {
                    Some(x) => g.push(x),
                    None => {
                        return Err(Error::Falsified(format!(
                            "generator {i} lost during closure"
                        )))
                    }
                }
            }
            Ok((t.monoid, g, None))
        }
        Err(e) => Err(e),
    }
}

fn hat_laws(h: &Hypergraph, q: &FinMonoid, t: Elem, vs: &[Elem]) -> HatLaws {
    let zero = q.zero();
    let is_zero = |x: Elem| Some(x) == zero;
    let mut laws = HatLaws {
        rule1: is_zero(q.mul(t, t)),
        rule2: true,
        rule3: true,
        rule4: true,
        rule5: true,
    };
    for (u, &uu) in vs.iter().enumerate() {
        laws.rule1 &= is_zero(q.product([t, uu, t]));
        laws.rule3 &= is_zero(q.mul(uu, uu));
        for (v, &vv) in vs.iter().enumerate() {
            laws.rule1 &= is_zero(q.product([t, uu, vv, t]));
            laws.rule2 &= q.mul(uu, vv) == q.mul(vv, uu);
            if u != v && !h.pair_extends(u as Vertex, v as Vertex) {
                laws.rule4 &= is_zero(q.mul(uu, vv));
            }
        }
    }
    for e in h.edges() {
        let p = q.product(e.iter().map(|&x| vs[x as usize]));
        laws.rule5 &= q.product([t, p, t]) == t;
    }
    laws
}

/// Checks `T/I ≅ target` under `gens[i] ↦ target generator i`.
fn match_target(q: &FinMonoid, gens: &[Elem], target: &HGMonoid) -> Result<Vec<(String, String)>> {
    let constraints: Vec<(Elem, Elem)> = gens.iter().copied().zip(target.generators()).collect();
    let iso = find_isomorphism_with(q, target.monoid(), &constraints)?.ok_or_else(|| {
        Error::Falsified(format!(
            "quotient of size {} is not isomorphic to the {} monoid of size {}",
            q.size(),
            target.variant(),
            target.size()
        ))
    })?;
    Ok(gens
        .iter()
        .map(|&g| {
            (
                q.label(g).to_string(),
                target.label(iso[g as usize]).to_string(),
            )
        })
        .collect())
}

/// Hat generators in `(A₂¹)^N`: `t̂` first, then `v̂` for each vertex.
/// Coordinates are the 2-subsets of `V`, then the non-extending pairs,
/// then `V`.
pub fn a21_generators(h: &Hypergraph) -> (A21Coords, Vec<Vec<Elem>>) {
    let n = h.vertex_count();
    let mut pairs = Vec::new();
    for u in 0..n as Vertex {
        for v in u + 1..n as Vertex {
            pairs.push((u, v));
        }
    }
    let marked: Vec<(Vertex, Vertex)> = pairs
        .iter()
        .copied()
        .filter(|&(u, v)| !h.pair_extends(u, v))
        .collect();
    let coords = pairs.len() + marked.len() + n;
    let t_hat: Vec<Elem> = (0..coords)
        .map(|i| if i < pairs.len() { C } else { D })
        .collect();
    let mut gens = vec![t_hat];
    for v in 0..n as Vertex {
        let mut g = Vec::with_capacity(coords);
        g.extend(
            pairs
                .iter()
                .map(|&(a, b)| if a == v || b == v { ONE } else { D }),
        );
        g.extend(
            marked
                .iter()
                .map(|&(a, b)| if a == v || b == v { C } else { ONE }),
        );
        g.extend((0..n as Vertex).map(|p| if p == v { C } else { ONE }));
        gens.push(g);
    }
    let c = A21Coords {
        coords,
        pair_coords: pairs.len(),
        non_extending_coords: marked.len(),
        vertex_coords: n,
    };
    (c, gens)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct A21Coords {
    pub coords: usize,
    pub pair_coords: usize,
    pub non_extending_coords: usize,
    pub vertex_coords: usize,
}

/// Builds `T/I ≤ (A₂¹)^N / I` and checks how it relates to the three
/// presented monoids. `verified` means the hat laws hold and `M_H` is a
/// homomorphic image of `T/I`, so `M_H` lies in the variety of A₂¹.
pub fn a21_witness(h: &Hypergraph, options: WitnessOptions) -> Result<A21Witness> {
    let natural = build(h, Variant::Natural)?;
    let (layout, gens) = a21_generators(h);
    let base = brandt_a21();
    let (q, g, closure_size) = close_and_quotient(&base, layout.coords, &gens, options)?;
    let laws = hat_laws(h, &q, g[0], &g[1..]);
    let constraints = |target: &HGMonoid| -> Vec<(Elem, Elem)> {
        g.iter().copied().zip(target.generators()).collect()
    };
    let natural_iso = find_isomorphism_with(&q, natural.monoid(), &constraints(&natural))?;
    let natural_constraints: Vec<(Elem, Elem)> = constraints(&natural)
        .into_iter()
        .map(|(a, b)| (b, a))
        .collect();
    let natural_onto = find_homomorphism(natural.monoid(), &q, &natural_constraints)?.is_some();
    let mut isomorphic_to = None;
    let mut full_image = false;
    let mut generator_images = Vec::new();
    for v in Variant::ALL {
        let target = if v == Variant::Natural {
            natural.clone()
        } else {
            build(h, v)?
        };
        if isomorphic_to.is_none()
            && find_isomorphism_with(&q, target.monoid(), &constraints(&target))?.is_some()
        {
            isomorphic_to = Some(v);
        }
        if v == Variant::Full {
            if let Some(f) = find_homomorphism(&q, target.monoid(), &constraints(&target))? {
                full_image = true;
                generator_images = g
                    .iter()
                    .map(|&x| {
                        (
                            q.label(x).to_string(),
                            target.label(f[x as usize]).to_string(),
                        )
                    })
                    .collect();
            }
        }
    }
    Ok(A21Witness {
        coords: layout,
        closure_size,
        quotient_size: q.size(),
        natural_size: natural.size(),
        hat_laws: laws,
        natural_isomorphic: natural_iso.is_some(),
        natural_onto,
        isomorphic_to,
        full_image,
        generator_images,
        verified: laws.all() && full_image,
    })
}

/// Realizes `M_H` as `T/I` for `T ≤ (B₂¹)^P`, `P` the majority
/// 2-colourings, when the flexible-colouring conditions hold.
pub fn b21_witness(h: &Hypergraph, options: WitnessOptions) -> Result<B21Witness> {
    let colourings = h.majority_colourings();
    let refuse = |reason: String, colourings: Vec<Colouring>| B21Witness {
        status: WitnessStatus::Refused { reason },
        colourings,
        closure_size: None,
        quotient_size: None,
        target_size: None,
        hat_laws: None,
        generator_images: Vec::new(),
    };
    if colourings.is_empty() {
        return Ok(refuse("no majority 2-colouring exists".into(), colourings));
    }
    if !h.flex_conditions() {
        return Ok(refuse(
            "majority 2-colourings do not realize every required colour pair".into(),
            colourings,
        ));
    }
    let target = build(h, Variant::Full)?;
    let coords = colourings.len();
    let mut gens = vec![vec![B; coords]];
    for v in h.vertices() {
        gens.push(
            colourings
                .iter()
                .map(|c| if c.get(v) == 1 { ONE } else { A })
                .collect(),
        );
    }
    let base = brandt_b21();
    let (q, g, closure_size) = close_and_quotient(&base, coords, &gens, options)?;
    let laws = hat_laws(h, &q, g[0], &g[1..]);
    if !laws.all() {
        return Err(Error::Falsified(format!(
            "hat generators break a defining rule: {laws:?}"
        )));
    }
    let generator_images = match_target(&q, &g, &target)?;
    Ok(B21Witness {
        status: WitnessStatus::Verified,
        colourings,
        closure_size,
        quotient_size: Some(q.size()),
        target_size: Some(target.size()),
        hat_laws: Some(laws),
        generator_images,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NecessityReport {
    pub majority_colourable: bool,
    pub flex_conditions: bool,
    pub witness: WitnessStatus,
    /// `M_H ⊭ p_H ≈ p_H²` under the canonical assignment, when `M_H` can
    /// be built.
    pub self_failure: Option<bool>,
    pub p_length: Option<usize>,
    /// True when a missing majority colouring comes with both a refused
    /// witness and a failing `p_H ≈ p_H²`.
    pub consistent: bool,
}

pub fn majority_necessity_experiment(
    h: &Hypergraph,
    options: WitnessOptions,
) -> Result<NecessityReport> {
    let majority_colourable = h.has_majority_colouring();
    let flex = h.flex_conditions();
    let witness = match b21_witness(h, options) {
        Ok(w) => w.status,
        Err(Error::Budget {
            what,
            needed,
            budget,
            ..
        }) => WitnessStatus::Refused {
            reason: format!("{what} needs {needed}, budget {budget}"),
        },
        Err(e) => return Err(e),
    };
    let (self_failure, p_length) = match crate::identities::self_failure(h, &Default::default()) {
        Ok(s) => (Some(s.refuted), Some(s.p_length)),
        Err(Error::Precondition(_)) => (None, None),
        Err(e) => return Err(e),
    };
    let consistent = if majority_colourable {
        true
    } else {
        matches!(witness, WitnessStatus::Refused { .. }) && self_failure == Some(true)
    };
    Ok(NecessityReport {
        majority_colourable,
        flex_conditions: flex,
        witness,
        self_failure,
        p_length,
        consistent,
    })
}
