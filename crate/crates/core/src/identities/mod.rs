//! Separating identities: `p_H`, the `w_n` experiments, Zimin words and
//! one-step rewriting.

mod pword;
mod report;
mod rewrite;
mod separation;
mod wn;

use serde_json::json;

pub use pword::{
    build_p_word, check_plan, p_word_from_blocks, vertex_letter, PWord, PWordOptions, PWordPlan,
    PlanCheck, PlanStrategy,
};
pub use report::{format_assignment, Outcome, ReportRow, SeparationReport};
pub use rewrite::{
    check_fixture, find_rewrite_applications, realization_fixtures, rewrite_step,
    verify_realization, zimin_criterion, zimin_realization, Application, FixtureCheck,
    RealizationFixture,
};
pub use separation::{
    cross_satisfaction_check, p_word, self_failure, self_failure_check, CrossOptions, SelfFailure,
};
pub use wn::{
    b21_image_classification, multinomial, wn_isoterm_experiment, ImageClassification, ImageShape,
    WnMode, WnOptions,
};

use crate::error::Result;
use crate::finmon::{satisfies_with, zimin_monoid, Identity, SatisfyOptions, Strategy, Verdict};
use crate::words::Word;

/// The Zimin criterion for `u ≈ v` together with a check of the identity
/// in `M(z_n)`: exhaustive when within `budget`, otherwise `samples`
/// random assignments.
pub fn zimin_criterion_experiment(
    u: &Word,
    v: &Word,
    n: u32,
    samples: u64,
    seed: u64,
    budget: u128,
) -> Result<SeparationReport> {
    let criterion = zimin_criterion(u, v);
    let z = zimin_monoid(n)?;
    let id = Identity::new(u.clone(), v.clone());
    let vars = id.variables().len() as u32;
    let space = (z.monoid.size() as u128)
        .checked_pow(vars)
        .unwrap_or(u128::MAX);
    let strategy = if space <= budget {
        Strategy::Exhaustive
    } else {
        Strategy::Randomized { samples, seed }
    };
    let verdict = satisfies_with(
        &z.monoid,
        &id,
        &SatisfyOptions {
            strategy,
            budget,
            order: None,
        },
    )?;
    let identity = format!("{u} = {v}");
    let instance = format!("M(z{n})");
    let row = match &verdict {
        Verdict::Satisfied { .. } => ReportRow::new(instance, identity, Outcome::Satisfied),
        Verdict::Refuted { counterexample, .. } => {
            ReportRow::new(instance, identity, Outcome::Refuted)
                .with_witness(format_assignment(&z.monoid, counterexample))
        }
        Verdict::Inconclusive { samples, seed } => {
            let mut r = ReportRow::new(instance, identity, Outcome::Inconclusive);
            r.samples = Some(*samples);
            r.seed = Some(*seed);
            r
        }
    };
    // the criterion is sufficient only; a refutation contradicts it only
    // when the criterion holds
    let status = match (criterion, &verdict) {
        (true, Verdict::Refuted { .. }) => Outcome::Falsified,
        (true, Verdict::Satisfied { .. }) | (false, _) => Outcome::Confirmed,
        (true, Verdict::Inconclusive { .. }) => Outcome::Inconclusive,
    };
    Ok(SeparationReport {
        experiment: "zimin-criterion".into(),
        claim: "identities meeting the Zimin criterion hold in M(z_n)".into(),
        status,
        rows: vec![row],
        details: json!({
            "criterion": criterion,
            "n": n,
            "monoid_size": z.monoid.size(),
            "verdict": verdict,
        }),
    })
}
