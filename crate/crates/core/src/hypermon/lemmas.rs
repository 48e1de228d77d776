use serde::{Deserialize, Serialize};

use super::{HGElement, HGMonoid, Payload, Variant};
use crate::error::{Error, Result};
use crate::finmon::{brandt_b21, find_isomorphism, satisfies, Identity, Strategy};
use crate::words::{Letter, Word};

fn require_full(b: &HGMonoid, what: &str) -> Result<()> {
    if b.variant() != Variant::Full {
        return Err(Error::Precondition(format!(
            "{what} needs the full variant, got {}",
            b.variant()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdempotentProfile {
    pub idempotents: Vec<String>,
    pub predicted: usize,
}

/// Whether the two sides of `l t r` are disjoint with union a hyperedge.
fn complementary(b: &HGMonoid, l: Option<Payload>, r: Option<Payload>) -> bool {
    match (l, r) {
        (None, Some(p)) | (Some(p), None) => p.size() == 3,
        (Some(Payload::Vertex(x)), Some(Payload::Class(c)))
        | (Some(Payload::Class(c)), Some(Payload::Vertex(x))) => {
            b.pairs().and_then(|p| p.completion(c)) == Some(x)
        }
        (Some(a), Some(c)) if a.size() + c.size() == 3 => {
            match (b.payload_vertices(a), b.payload_vertices(c)) {
                (Some(mut vs), Some(ws)) => {
                    vs.extend(ws);
                    b.hypergraph().is_edge(vs[0], vs[1], vs[2])
                        && vs[0] != vs[1]
                        && vs[1] != vs[2]
                        && vs[0] != vs[2]
                }
                _ => false,
            }
        }
        _ => false,
    }
}

/// Checks that the idempotents are exactly 0, 1 and the forms `u t v` with
/// `u`, `v` disjoint and `u ∪ v` a hyperedge.
pub fn idempotent_profile(b: &HGMonoid) -> Result<IdempotentProfile> {
    require_full(b, "idempotent profile")?;
    let m = b.monoid();
    let mut predicted = 0;
    for i in m.elements() {
        let expect = match b.element(i) {
            HGElement::Zero | HGElement::One => true,
            HGElement::VProd(_) => false,
            HGElement::TForm(l, r) => complementary(b, l, r),
        };
        predicted += usize::from(expect);
        if expect != m.is_idempotent(i) {
            return Err(Error::Falsified(format!(
                "element {} is {}idempotent against the characterization",
                b.label(i),
                if expect { "not " } else { "" }
            )));
        }
    }
    Ok(IdempotentProfile {
        idempotents: m
            .idempotents()
            .iter()
            .map(|&i| b.label(i).to_string())
            .collect(),
        predicted,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CommutingReport {
    pub idempotents: usize,
    pub commute: bool,
    /// Every pair has `e = f`, `{0,1} ∩ {e,f} ≠ ∅`, or `ef = fe = 0`.
    pub trichotomy: bool,
    /// `x²y² ≈ y²x²` checked over all assignments.
    pub x2y2_law: bool,
}

pub fn commuting_idempotents_check(b: &HGMonoid) -> Result<CommutingReport> {
    require_full(b, "commuting idempotents check")?;
    let m = b.monoid();
    let ids = m.idempotents();
    let zero = m.zero();
    let mut commute = true;
    let mut trichotomy = true;
    for &e in &ids {
        for &f in &ids {
            let (ef, fe) = (m.mul(e, f), m.mul(f, e));
            commute &= ef == fe;
            let trivial =
                [Some(e), Some(f)].contains(&zero) || e == m.identity() || f == m.identity();
            trichotomy &= e == f || trivial || (Some(ef) == zero && Some(fe) == zero);
        }
    }
    let (x, y) = (Letter::x(0), Letter::x(1));
    let law = Identity::new(Word::new(vec![x, x, y, y]), Word::new(vec![y, y, x, x]));
    let x2y2_law = satisfies(m, &law, Strategy::Exhaustive)?.is_satisfied();
    Ok(CommutingReport {
        idempotents: ids.len(),
        commute,
        trichotomy,
        x2y2_law,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct B21Inside {
    pub size: usize,
    pub elements: Vec<String>,
    /// B₂¹ label to submonoid label.
    pub isomorphism: Vec<(String, String)>,
}

/// The submonoid generated by `t` and `ete`, with an isomorphism from B₂¹
/// found by search.
pub fn b21_inside(b: &HGMonoid) -> Result<B21Inside> {
    require_full(b, "B21 embedding")?;
    let m = b.monoid();
    let e = b
        .e()
        .ok_or_else(|| Error::Precondition("no hyperedges".into()))?;
    let t = b.t();
    let ete = m.product([e, t, e]);
    let (sub, emb) = m.submonoid(&[t, ete]);
    let b21 = brandt_b21();
    let iso = find_isomorphism(&b21, &sub)?
        .ok_or_else(|| Error::Falsified(format!("submonoid of size {} is not B21", sub.size())))?;
    Ok(B21Inside {
        size: sub.size(),
        elements: emb.iter().map(|&i| b.label(i).to_string()).collect(),
        isomorphism: b21
            .elements()
            .map(|x| {
                (
                    b21.label(x).to_string(),
                    b.label(emb[iso[x as usize] as usize]).to_string(),
                )
            })
            .collect(),
    })
}
