//! Monoids presented by a 3-uniform hypergraph of girth at least 4, built
//! directly from their normal forms.

mod lemmas;
mod witness;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finmon::{Elem, FinMonoid};
use crate::hypergraph::{Hypergraph, PairClass, PairPartition, Vertex};

pub use lemmas::{
    b21_inside, commuting_idempotents_check, idempotent_profile, B21Inside, CommutingReport,
    IdempotentProfile,
};
pub use witness::{
    a21_generators, a21_witness, b21_witness, majority_necessity_experiment, A21Coords, A21Witness,
    B21Witness, HatLaws, NecessityReport, WitnessOptions, WitnessStatus,
};

/// Which rules of the presentation are imposed.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Rules (1)-(5).
    Natural,
    /// Adds (6) and (7): all hyperedge products collapse to `e`, `ete = e`.
    Sharp,
    /// Adds (8): pairs are identified up to the pair equivalence.
    Full,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Natural, Variant::Sharp, Variant::Full];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Natural => "natural",
            Variant::Sharp => "sharp",
            Variant::Full => "full",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Variant> {
        match s {
            "natural" => Ok(Variant::Natural),
            "sharp" => Ok(Variant::Sharp),
            "full" => Ok(Variant::Full),
            _ => Err(Error::InvalidParameter(format!(
                "unknown variant {s:?} (expected natural, sharp or full)"
            ))),
        }
    }
}

/// A nonempty product of vertices lying inside one hyperedge.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Payload {
    Vertex(Vertex),
    /// An extending pair, smaller vertex first (natural and sharp).
    Pair(Vertex, Vertex),
    /// A pair-equivalence class of extending pairs (full).
    Class(PairClass),
    /// A specific hyperedge by index (natural).
    Edge(usize),
    /// The common value of all hyperedge products (sharp and full).
    E,
}

impl Payload {
    pub fn size(self) -> usize {
        match self {
            Payload::Vertex(_) => 1,
            Payload::Pair(..) | Payload::Class(_) => 2,
            Payload::Edge(_) | Payload::E => 3,
        }
    }
}

/// Normal form of an element. `TForm(l, r)` is `l t r`, `None` standing for
/// an empty side.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum HGElement {
    Zero,
    One,
    VProd(Payload),
    TForm(Option<Payload>, Option<Payload>),
}

/// A built hypergraph monoid with its normal forms.
#[derive(Clone, Debug)]
pub struct HGMonoid {
    hypergraph: Hypergraph,
    variant: Variant,
    pairs: Option<PairPartition>,
    monoid: FinMonoid,
    elements: Vec<HGElement>,
    index: HashMap<HGElement, Elem>,
}

/// Product of two vertex payloads, `None` meaning 0.
fn merge(
    h: &Hypergraph,
    pairs: Option<&PairPartition>,
    variant: Variant,
    a: Payload,
    b: Payload,
) -> Option<Payload> {
    use Payload::*;
    if a.size() + b.size() > 3 {
        return None;
    }
    match (a, b) {
        (Vertex(u), Vertex(v)) => {
            if u == v || !h.pair_extends(u, v) {
                None
            } else if variant == Variant::Full {
                Some(Class(
                    pairs
                        .expect("full variant has a pair partition")
                        .class_of(u, v),
                ))
            } else {
                Some(Pair(u.min(v), u.max(v)))
            }
        }
        (Vertex(x), Pair(u, v)) | (Pair(u, v), Vertex(x)) => {
            let i = h.edge_index(u, v, x).filter(|_| x != u && x != v)?;
            Some(if variant == Variant::Natural {
                Edge(i)
            } else {
                E
            })
        }
        (Vertex(x), Class(c)) | (Class(c), Vertex(x)) => (pairs
            .expect("full variant has a pair partition")
            .completion(c)
            == Some(x))
        .then_some(E),
        _ => unreachable!("sizes exceed 3"),
    }
}

/// `merge` extended to possibly empty sides.
fn merge_side(
    h: &Hypergraph,
    pairs: Option<&PairPartition>,
    variant: Variant,
    a: Option<Payload>,
    b: Option<Payload>,
) -> std::result::Result<Option<Payload>, ()> {
    match (a, b) {
        (None, x) | (x, None) => Ok(x),
        (Some(a), Some(b)) => merge(h, pairs, variant, a, b).map(Some).ok_or(()),
    }
}

impl HGMonoid {
    /// Builds `M_H`, `M_H^♯` or `M_H^♮` from normal forms and validates the
    /// table and the defining rules.
    pub fn build(h: &Hypergraph, variant: Variant) -> Result<HGMonoid> {
        let isolated = h.isolated_vertices();
        if !isolated.is_empty() {
            return Err(Error::Precondition(format!(
                "vertex {} lies in no hyperedge",
                h.name(isolated[0])
            )));
        }
        let girth = h.girth();
        if !girth.at_least(4) {
            return Err(Error::Precondition(format!("girth {girth} is below 4")));
        }
        if h.vertex_count() == 0 {
            return Err(Error::Precondition("hypergraph has no vertices".into()));
        }
        let pairs = match variant {
            Variant::Full => Some(h.pair_equivalence()?),
            _ => None,
        };
        let mut payloads: Vec<Payload> = h.vertices().map(Payload::Vertex).collect();
        match variant {
            Variant::Natural | Variant::Sharp => {
                for u in h.vertices() {
                    for v in u + 1..h.vertex_count() as Vertex {
                        if h.pair_extends(u, v) {
                            payloads.push(Payload::Pair(u, v));
                        }
                    }
                }
            }
            Variant::Full => {
                let p = pairs.as_ref().expect("computed above");
                for c in 0..p.class_count() {
                    if Some(c) != p.non_extending_class() {
                        payloads.push(Payload::Class(c));
                    }
                }
            }
        }
        match variant {
            Variant::Natural => payloads.extend((0..h.edge_count()).map(Payload::Edge)),
            Variant::Sharp | Variant::Full => {
                if h.edge_count() > 0 {
                    payloads.push(Payload::E)
                }
            }
        }
        let mut elements = vec![
            HGElement::Zero,
            HGElement::One,
            HGElement::TForm(None, None),
        ];
        elements.extend(payloads.iter().map(|&p| HGElement::VProd(p)));
        let sides: Vec<Option<Payload>> = std::iter::once(None)
            .chain(payloads.iter().copied().map(Some))
            .collect();
        for &l in &sides {
            for &r in &sides {
                if (l, r) == (None, None) {
                    continue;
                }
                if variant != Variant::Natural && l == Some(Payload::E) && r == Some(Payload::E) {
                    // e t e = e
                    continue;
                }
                elements.push(HGElement::TForm(l, r));
            }
        }
        let index: HashMap<HGElement, Elem> = elements
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i as Elem))
            .collect();
        let n = elements.len();
        let mut table = vec![0 as Elem; n * n];
        let mut bundle = HGMonoid {
            hypergraph: h.clone(),
            variant,
            pairs,
            monoid: FinMonoid::trivial(),
            elements,
            index,
        };
        for a in 0..n {
            for b in 0..n {
                let p = bundle.multiply(bundle.elements[a], bundle.elements[b]);
                table[a * n + b] = *bundle.index.get(&p).ok_or_else(|| {
                    Error::Falsified(format!("product {p:?} missing from the element inventory"))
                })?;
            }
        }
        let labels = bundle.elements.iter().map(|&e| bundle.format(e)).collect();
        let gens: Vec<Elem> = std::iter::once(2)
            .chain(h.vertices().map(|v| bundle.vertex(v)))
            .collect();
        bundle.monoid = FinMonoid::from_flat(n, table, 1, Some(labels), Some(&gens))?;
        if bundle.monoid.zero() != Some(0) {
            return Err(Error::Falsified("normal form 0 is not the zero".into()));
        }
        bundle.check_rules()?;
        Ok(bundle)
    }

    fn normalize(&self, e: HGElement) -> HGElement {
        match e {
            HGElement::TForm(Some(Payload::E), Some(Payload::E))
                if self.variant != Variant::Natural =>
            {
                HGElement::VProd(Payload::E)
            }
            e => e,
        }
    }

    /// Product of normal forms.
    pub fn multiply(&self, a: HGElement, b: HGElement) -> HGElement {
        use HGElement::*;
        let (h, p, v) = (&self.hypergraph, self.pairs.as_ref(), self.variant);
        let r = match (a, b) {
            (Zero, _) | (_, Zero) => Zero,
            (One, x) | (x, One) => x,
            (VProd(x), VProd(y)) => merge(h, p, v, x, y).map_or(Zero, VProd),
            (VProd(x), TForm(l, r)) => match merge_side(h, p, v, Some(x), l) {
                Ok(l) => TForm(l, r),
                Err(()) => Zero,
            },
            (TForm(l, r), VProd(x)) => match merge_side(h, p, v, r, Some(x)) {
                Ok(r) => TForm(l, r),
                Err(()) => Zero,
            },
            (TForm(l, r), TForm(l2, r2)) => match merge_side(h, p, v, r, l2) {
                // t s t survives only when s is a whole hyperedge
                Ok(Some(mid)) if mid.size() == 3 => TForm(l, r2),
                _ => Zero,
            },
        };
        self.normalize(r)
    }

    fn check_rules(&self) -> Result<()> {
        let m = &self.monoid;
        let t = self.t();
        let h = &self.hypergraph;
        let fail =
            |rule: u8, what: String| Err(Error::Falsified(format!("rule ({rule}) fails: {what}")));
        let zero = 0;
        if m.mul(t, t) != zero {
            return fail(1, "t t".into());
        }
        let vs: Vec<Vertex> = h.vertices().collect();
        for &u in &vs {
            let uu = self.vertex(u);
            if m.product([t, uu, t]) != zero {
                return fail(1, format!("t {} t", h.name(u)));
            }
            if m.mul(uu, uu) != zero {
                return fail(3, h.name(u).into());
            }
            for &v in &vs {
                let vv = self.vertex(v);
                if m.product([t, uu, vv, t]) != zero {
                    return fail(1, format!("t {} {} t", h.name(u), h.name(v)));
                }
                if m.mul(uu, vv) != m.mul(vv, uu) {
                    return fail(2, format!("{} {}", h.name(u), h.name(v)));
                }
                if u != v && !h.pair_extends(u, v) && m.mul(uu, vv) != zero {
                    return fail(4, format!("{} {}", h.name(u), h.name(v)));
                }
            }
        }
        let edge_products: Vec<Elem> = h
            .edges()
            .iter()
            .map(|e| m.product(e.iter().map(|&x| self.vertex(x))))
            .collect();
        for (e, &p) in h.edges().iter().zip(&edge_products) {
            if m.product([t, p, t]) != t {
                return fail(5, format!("{e:?}"));
            }
        }
        if self.variant != Variant::Natural {
            if edge_products.windows(2).any(|w| w[0] != w[1]) {
                return fail(6, "hyperedge products differ".into());
            }
            if let Some(&e) = edge_products.first() {
                if m.product([e, t, e]) != e {
                    return fail(7, "e t e".into());
                }
            }
        }
        if let (Variant::Full, Some(p)) = (self.variant, &self.pairs) {
            for class in p.classes() {
                if Some(p.class_of(class[0].0, class[0].1)) == p.non_extending_class() {
                    continue;
                }
                let rep = m.mul(self.vertex(class[0].0), self.vertex(class[0].1));
                if class
                    .iter()
                    .any(|&(u, v)| m.mul(self.vertex(u), self.vertex(v)) != rep)
                {
                    return fail(8, "equivalent pairs differ".into());
                }
            }
        }
        Ok(())
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn monoid(&self) -> &FinMonoid {
        &self.monoid
    }

    pub fn pairs(&self) -> Option<&PairPartition> {
        self.pairs.as_ref()
    }

    pub fn elements(&self) -> &[HGElement] {
        &self.elements
    }

    pub fn element(&self, i: Elem) -> HGElement {
        self.elements[i as usize]
    }

    pub fn index_of(&self, e: HGElement) -> Option<Elem> {
        self.index.get(&self.normalize(e)).copied()
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn t(&self) -> Elem {
        2
    }

    pub fn vertex(&self, v: Vertex) -> Elem {
        self.index[&HGElement::VProd(Payload::Vertex(v))]
    }

    /// The element `e` (sharp and full variants with at least one edge).
    pub fn e(&self) -> Option<Elem> {
        self.index.get(&HGElement::VProd(Payload::E)).copied()
    }

    /// Generator images: `t` first, then the vertices in order.
    pub fn generators(&self) -> Vec<Elem> {
        std::iter::once(self.t())
            .chain(self.hypergraph.vertices().map(|v| self.vertex(v)))
            .collect()
    }

    /// Vertex set of a payload, for natural and sharp payloads and for
    /// vertices; classes and `e` have no single vertex set.
    pub fn payload_vertices(&self, p: Payload) -> Option<Vec<Vertex>> {
        match p {
            Payload::Vertex(v) => Some(vec![v]),
            Payload::Pair(u, v) => Some(vec![u, v]),
            Payload::Edge(i) => Some(self.hypergraph.edges()[i].to_vec()),
            Payload::Class(_) | Payload::E => None,
        }
    }

    fn names(&self, vs: &[Vertex]) -> String {
        let sep = if self.hypergraph.compact_names() {
            ""
        } else {
            ","
        };
        vs.iter()
            .map(|&v| self.hypergraph.name(v))
            .collect::<Vec<_>>()
            .join(sep)
    }

    fn format_payload(&self, p: Payload) -> String {
        match p {
            Payload::Vertex(v) => self.hypergraph.name(v).to_string(),
            Payload::Pair(u, v) => self.names(&[u, v]),
            Payload::Edge(i) => self.names(&self.hypergraph.edges()[i]),
            Payload::E => "e".into(),
            Payload::Class(c) => {
                let (u, v) = self.pairs.as_ref().expect("full variant").representative(c);
                format!("[{},{}]", self.hypergraph.name(u), self.hypergraph.name(v))
            }
        }
    }

    /// Labels: `0`, `1`, `u`, `[u,v]`, `e`, and `u|t|vw` for `u t vw`.
    pub fn format(&self, e: HGElement) -> String {
        let side = |s: Option<Payload>| s.map_or(String::new(), |p| self.format_payload(p));
        match e {
            HGElement::Zero => "0".into(),
            HGElement::One => "1".into(),
            HGElement::VProd(p) => self.format_payload(p),
            HGElement::TForm(l, r) => format!("{}|t|{}", side(l), side(r)),
        }
    }

    pub fn label(&self, i: Elem) -> &str {
        self.monoid.label(i)
    }

    /// `{"labels": [...]}` keyed by element index.
    pub fn labels_json(&self) -> String {
        serde_json::json!({ "variant": self.variant, "labels": self.monoid.labels() }).to_string()
    }
}

/// Shorthand for [`HGMonoid::build`].
pub fn build(h: &Hypergraph, variant: Variant) -> Result<HGMonoid> {
    HGMonoid::build(h, variant)
}
