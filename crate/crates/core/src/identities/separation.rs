use serde::{Deserialize, Serialize};
use serde_json::json;

use super::pword::{build_p_word, vertex_letter, PWordOptions};
use super::report::{format_assignment, Outcome, ReportRow, SeparationReport};
use crate::error::{Error, Result};
use crate::finmon::{
    evaluate, satisfies_with, Assignment, Identity, SatisfyOptions, Strategy, Verdict,
};
use crate::hypergraph::{wildly_incomparable, Hypergraph};
use crate::hypermon::{build, HGElement, HGMonoid, Variant};
use crate::words::{Letter, Word};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SelfFailure {
    pub blocks: usize,
    pub p_length: usize,
    pub p_value: String,
    pub p2_value: String,
    /// `p_H ↦ t` and `p_H² ↦ 0`.
    pub refuted: bool,
    pub assignment: Assignment,
}

/// Evaluates `p_H` and `p_H²` in `M_H` under `y ↦ t`, `x_u ↦ u`.
pub fn self_failure(h: &Hypergraph, options: &PWordOptions) -> Result<SelfFailure> {
    let b = build(h, Variant::Full)?;
    let p = build_p_word(h, options)?;
    let m = b.monoid();
    let theta = Assignment::from_pairs(
        std::iter::once((Letter::Y, b.t()))
            .chain(h.vertices().map(|v| (vertex_letter(v), b.vertex(v)))),
    );
    let pv = evaluate(m, &theta, &p.word)?;
    let p2v = evaluate(m, &theta, &p.word.pow(2))?;
    let refuted = pv == b.t() && Some(p2v) == m.zero();
    if !refuted {
        return Err(Error::Falsified(format!(
            "canonical assignment gives p = {} and p² = {}",
            m.label(pv),
            m.label(p2v)
        )));
    }
    Ok(SelfFailure {
        blocks: p.plan.blocks.len(),
        p_length: p.word.len(),
        p_value: m.label(pv).to_string(),
        p2_value: m.label(p2v).to_string(),
        refuted,
        assignment: theta,
    })
}

fn instance_name(h: &Hypergraph) -> String {
    format!("|V|={} |E|={}", h.vertex_count(), h.edge_count())
}

pub fn self_failure_check(h: &Hypergraph, options: &PWordOptions) -> Result<SeparationReport> {
    let s = self_failure(h, options)?;
    let b = build(h, Variant::Full)?;
    let row = ReportRow::new(instance_name(h), "p_H = p_H^2", Outcome::Refuted)
        .with_witness(format_assignment(b.monoid(), &s.assignment));
    Ok(SeparationReport {
        experiment: "self-failure".into(),
        claim: "M_H fails p_H = p_H^2 under y->t, x_u->u".into(),
        status: Outcome::Confirmed,
        rows: vec![row],
        details: serde_json::to_value(&s)?,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct CrossOptions {
    pub budget: u128,
    /// Fall back to sampling when the space exceeds `budget`.
    pub randomized_fallback: bool,
    pub samples: u64,
    pub seed: u64,
    pub p_word: PWordOptions,
}

impl Default for CrossOptions {
    fn default() -> Self {
        CrossOptions {
            budget: 100_000_000,
            randomized_fallback: true,
            samples: 1_000_000,
            seed: 0,
            p_word: PWordOptions::default(),
        }
    }
}

/// Case of the value of `y` in a counterexample.
fn y_case(b: &HGMonoid, value: u32) -> &'static str {
    match b.element(value) {
        HGElement::One => "identity",
        HGElement::Zero => "zero",
        _ if b.monoid().is_idempotent(value) => "idempotent",
        HGElement::VProd(_) => "vertex product",
        HGElement::TForm(..) => "t-form",
    }
}

/// Checks `M_H ⊨ p_G ≈ p_G²`, `y` assigned first.
pub fn cross_satisfaction_check(
    g: &Hypergraph,
    h: &Hypergraph,
    options: &CrossOptions,
) -> Result<SeparationReport> {
    let b = build(h, Variant::Full)?;
    let p = build_p_word(g, &options.p_word)?;
    let id = Identity::new(p.word.clone(), p.word.pow(2));
    let mut order = vec![Letter::Y];
    for l in p.word.iter() {
        if !order.contains(&l) {
            order.push(l);
        }
    }
    let exhaustive = SatisfyOptions {
        strategy: Strategy::Exhaustive,
        budget: options.budget,
        order: Some(order.clone()),
    };
    let verdict = match satisfies_with(b.monoid(), &id, &exhaustive) {
        Err(Error::Budget { .. }) if options.randomized_fallback => satisfies_with(
            b.monoid(),
            &id,
            &SatisfyOptions {
                strategy: Strategy::Randomized {
                    samples: options.samples,
                    seed: options.seed,
                },
                budget: options.budget,
                order: Some(order),
            },
        )?,
        other => other?,
    };
    let instance = format!("G {} / H {}", instance_name(g), instance_name(h));
    let mut row = match &verdict {
        Verdict::Satisfied { .. } => ReportRow::new(instance, "p_G = p_G^2", Outcome::Satisfied),
        Verdict::Refuted { counterexample, .. } => {
            ReportRow::new(instance, "p_G = p_G^2", Outcome::Refuted)
                .with_witness(format_assignment(b.monoid(), counterexample))
        }
        Verdict::Inconclusive { samples, seed } => {
            let mut r = ReportRow::new(instance, "p_G = p_G^2", Outcome::Inconclusive);
            r.samples = Some(*samples);
            r.seed = Some(*seed);
            r
        }
    };
    if row.verdict != Outcome::Inconclusive {
        row.samples = None;
    }
    let case = verdict
        .counterexample()
        .and_then(|c| c.get(Letter::Y))
        .map(|v| y_case(&b, v));
    let status = match verdict {
        Verdict::Satisfied { .. } => Outcome::Confirmed,
        Verdict::Refuted { .. } => Outcome::Falsified,
        Verdict::Inconclusive { .. } => Outcome::Inconclusive,
    };
    Ok(SeparationReport {
        experiment: "cross".into(),
        claim: "M_H satisfies p_G = p_G^2".into(),
        status,
        rows: vec![row],
        details: json!({
            "wildly_incomparable": wildly_incomparable(g, h),
            "p_length": p.word.len(),
            "blocks": p.plan.blocks.len(),
            "target_size": b.size(),
            "y_case": case,
            "verdict": verdict,
        }),
    })
}

/// `p_G` itself, for callers that only need the word.
pub fn p_word(g: &Hypergraph) -> Result<Word> {
    Ok(build_p_word(g, &PWordOptions::default())?.word)
}
