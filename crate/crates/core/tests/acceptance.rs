//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

mod common;

use std::time::{Duration, Instant};

use brandt_core::finmon::{
    brandt_a21, brandt_b21, evaluate, find_isomorphism, satisfies, satisfies_with, zimin_monoid,
    Assignment, FinMonoid, Identity, SatisfyOptions, Strategy,
};
use brandt_core::hypergraph::{generate_high_girth, GenerateConfig, Hypergraph, Vertex};
use brandt_core::hypermon::{
    a21_witness, b21_inside, b21_witness, build, HGElement, HGMonoid, Payload, Variant,
    WitnessOptions, WitnessStatus,
};
use brandt_core::identities::{
    b21_image_classification, build_p_word, check_fixture, cross_satisfaction_check,
    find_rewrite_applications, realization_fixtures, self_failure_check, vertex_letter,
    wn_isoterm_experiment, zimin_criterion, CrossOptions, ImageShape, Outcome, PWordOptions,
    WnMode, WnOptions,
};
use brandt_core::words::{w_n, w_n_prime, Letter, NameTable, Word};
use common::*;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1() -> Check {
    let b = brandt_b21();
    let a = brandt_a21();
    ensure(
        matches_matrices(&b, &B21_MATRICES),
        "B21 table differs from the matrix products",
    )?;
    ensure(
        matches_matrices(&a, &A21_MATRICES),
        "A21 table differs from the matrix products",
    )?;
    let l = |m: &FinMonoid, s: &str| m.find_label(s).unwrap();
    let (x, y) = (l(&b, "a"), l(&b, "b"));
    ensure(
        b.product([x, y, x]) == x
            && b.product([y, x, y]) == y
            && b.mul(x, x) == l(&b, "0")
            && b.mul(y, y) == l(&b, "0"),
        "B21 relations",
    )?;
    let (c, d) = (l(&a, "c"), l(&a, "d"));
    ensure(
        a.product([c, d, c]) == c
            && a.product([d, c, d]) == d
            && a.mul(c, c) == l(&a, "0")
            && a.mul(d, d) == d,
        "A21 relations",
    )?;
    Ok("36 products each, all relations".into())
}

fn c2() -> Check {
    let mut r = rng(2);
    let mut count = 0;
    for i in 0..240 {
        let n = 3 + i % 6;
        let max = n * (n - 1) * (n - 2) / 6;
        let m = 1 + (i / 6) % max.min(8);
        let h = random_hypergraph(&mut r, n, m);
        let g = brute_girth(n, h.edges());
        let ge = |k: usize| g.is_none_or(|x| x >= k);
        let c = h.check_conditions();
        ensure(c.one == ge(3), format!("(I) vs girth on {:?}", h.edges()))?;
        ensure(
            (c.one && c.two) == ge(4),
            format!("(I)+(II) vs girth on {:?}", h.edges()),
        )?;
        ensure(
            !(c.one && c.two) || c.three,
            format!("(III) fails on {:?}", h.edges()),
        )?;
        let lib = h.girth();
        ensure(
            (3..=9).all(|k| lib.at_least(k as u32) == ge(k)),
            format!("girth {lib} vs {g:?} on {:?}", h.edges()),
        )?;
        count += 1;
    }
    Ok(format!("{count} hypergraphs, 0 mismatches"))
}

/// Criterion 3's sweep: every shape under 20 seeded relabellings (the
/// first is the identity).
fn sweep() -> Vec<Hypergraph> {
    let mut r = rng(3);
    let mut out = Vec::new();
    for h in small_shapes(3, 9) {
        out.push(h.clone());
        for _ in 1..20 {
            let p = random_perm(&mut r, h.vertex_count());
            out.push(h.relabel(&p).unwrap());
        }
    }
    out
}

fn c3(sweep: &[Hypergraph]) -> Check {
    let shapes = small_shapes(3, 9).len();
    ensure(shapes == 7, format!("expected 7 shapes, found {shapes}"))?;
    let mut checked = 0;
    for (i, h) in sweep.iter().enumerate() {
        for v in Variant::ALL {
            let b = build(h, v).map_err(|e| format!("{v} on {:?}: {e}", h.edges()))?;
            // revalidate the table from scratch
            FinMonoid::from_rows(b.monoid().rows(), b.monoid().identity(), None)
                .map_err(|e| format!("{v} on {:?}: {e}", h.edges()))?;
            let cmp = compare_with_oracle(&b, i % 20 == 0);
            ensure(cmp.ok(), format!("{v} on {:?}: {cmp:?}", h.edges()))?;
            checked += 1;
        }
    }
    Ok(format!(
        "{shapes} shapes x 20 labellings x 3 variants = {checked} bundles"
    ))
}

fn predicted_idempotent(b: &HGMonoid, e: HGElement) -> bool {
    let h = b.hypergraph();
    let verts = |p: Payload| -> Vec<Vertex> {
        match p {
            Payload::Class(c) => {
                let (u, v) = b.pairs().unwrap().representative(c);
                vec![u, v]
            }
            Payload::E => h.edges()[0].to_vec(),
            other => b.payload_vertices(other).unwrap(),
        }
    };
    match e {
        HGElement::Zero | HGElement::One => true,
        HGElement::VProd(_) => false,
        HGElement::TForm(l, r) => {
            let mut all: Vec<Vertex> = l.map(verts).unwrap_or_default();
            let right = r.map(verts).unwrap_or_default();
            if right.iter().any(|v| all.contains(v)) {
                return false;
            }
            all.extend(right);
            all.len() == 3 && h.is_edge(all[0], all[1], all[2])
        }
    }
}

fn c4(sweep: &[Hypergraph]) -> Check {
    let (x, y) = (Letter::x(0), Letter::x(1));
    let x2y2 = Identity::new(Word::new(vec![x, x, y, y]), Word::new(vec![y, y, x, x]));
    let b21 = brandt_b21();
    let mut worst = Duration::ZERO;
    for h in sweep.iter().step_by(20) {
        let start = Instant::now();
        let b = build(h, Variant::Full).map_err(|e| e.to_string())?;
        let m = b.monoid();
        let idem: Vec<_> = m.elements().filter(|&i| m.mul(i, i) == i).collect();
        let predicted: Vec<_> = m
            .elements()
            .filter(|&i| predicted_idempotent(&b, b.element(i)))
            .collect();
        ensure(
            idem == predicted,
            format!("idempotents differ on {:?}", h.edges()),
        )?;
        ensure(
            idem.iter()
                .all(|&e| idem.iter().all(|&f| m.mul(e, f) == m.mul(f, e))),
            format!("idempotents do not commute on {:?}", h.edges()),
        )?;
        ensure(
            satisfies(m, &x2y2, Strategy::Exhaustive)
                .map_err(|e| e.to_string())?
                .is_satisfied(),
            format!("x2y2 = y2x2 fails on {:?}", h.edges()),
        )?;
        let e = b.e().ok_or("no e")?;
        let ete = m.product([e, b.t(), e]);
        let (sub, _) = m.submonoid(&[b.t(), ete]);
        ensure(
            sub.size() == 6,
            format!("<t, ete> has {} elements", sub.size()),
        )?;
        ensure(
            find_isomorphism(&sub, &b21)
                .map_err(|e| e.to_string())?
                .is_some(),
            "<t, ete> not isomorphic to B21",
        )?;
        ensure(
            b21_inside(&b).map_err(|e| e.to_string())?.size == 6,
            "b21_inside size",
        )?;
        worst = worst.max(start.elapsed());
    }
    ensure(
        worst < Duration::from_secs(60),
        format!("slowest bundle {worst:?}"),
    )?;
    Ok(format!("7 bundles, slowest {:.2}s", worst.as_secs_f64()))
}

fn single_edge() -> Hypergraph {
    Hypergraph::from_edges(3, &[[0, 1, 2]]).unwrap()
}

fn c5() -> Check {
    let start = Instant::now();
    let w = a21_witness(&single_edge(), WitnessOptions::default()).map_err(|e| e.to_string())?;
    ensure(start.elapsed() < Duration::from_secs(120), "over 2 min")?;
    ensure(w.hat_laws.all(), format!("hat laws {:?}", w.hat_laws))?;
    ensure(
        w.natural_isomorphic,
        format!(
            "T_H/I has {} elements, natural monoid {}; quotient is isomorphic to {:?}, natural maps onto it: {}",
            w.quotient_size,
            w.natural_size,
            w.isomorphic_to.map(|v| v.name()),
            w.natural_onto
        ),
    )?;
    Ok(format!("{} elements, hat laws hold", w.quotient_size))
}

fn random_hyperforest(seed: u64, edges: usize) -> Hypergraph {
    let mut r = rng(seed);
    let mut n: Vertex = 0;
    let mut list = Vec::new();
    for _ in 0..edges {
        if n > 0 && coin(&mut r) {
            let v = sample_indices(&mut r, n as usize, 1)[0] as Vertex;
            list.push([v, n, n + 1]);
            n += 2;
        } else {
            list.push([n, n + 1, n + 2]);
            n += 3;
        }
    }
    Hypergraph::from_edges(n as usize, &list).unwrap()
}

fn c6() -> Check {
    let mut sizes = Vec::new();
    for seed in 0..6u64 {
        let h = random_hyperforest(seed, 1 + (seed as usize % 4));
        ensure(h.is_hyperforest(), "generated forest has a cycle")?;
        ensure(
            h.flex_conditions(),
            format!("flex conditions fail on {:?}", h.edges()),
        )?;
        let start = Instant::now();
        let w = b21_witness(&h, WitnessOptions::default())
            .map_err(|e| format!("{:?}: {e}", h.edges()))?;
        ensure(
            w.status == WitnessStatus::Verified,
            format!("{:?}: {:?}", h.edges(), w.status),
        )?;
        let full = build(&h, Variant::Full).map_err(|e| e.to_string())?;
        ensure(
            w.quotient_size == Some(full.size()),
            format!("quotient {:?} vs {}", w.quotient_size, full.size()),
        )?;
        ensure(start.elapsed() < Duration::from_secs(120), "over 2 min")?;
        sizes.push(full.size());
    }
    Ok(format!("6 hyperforests, sizes {sizes:?}"))
}

fn c7(sweep: &[Hypergraph]) -> Check {
    let mut worst = Duration::ZERO;
    for h in sweep {
        let start = Instant::now();
        let p = build_p_word(h, &PWordOptions::default()).map_err(|e| e.to_string())?;
        let wc = word_conditions(h, &p.word);
        ensure(
            wc == WordConditions {
                shape: true,
                alpha: true,
                beta: true,
                gamma: true,
            },
            format!("{:?}: {wc:?}", h.edges()),
        )?;
        let b = build(h, Variant::Full).map_err(|e| e.to_string())?;
        let mut theta =
            Assignment::from_pairs(h.vertices().map(|v| (vertex_letter(v), b.vertex(v))));
        theta.insert(Letter::Y, b.t());
        let m = b.monoid();
        let pv = evaluate(m, &theta, &p.word).map_err(|e| e.to_string())?;
        let p2v = evaluate(m, &theta, &p.word.pow(2)).map_err(|e| e.to_string())?;
        ensure(
            pv == b.t() && Some(p2v) == m.zero(),
            format!(
                "{:?}: p -> {}, p^2 -> {}",
                h.edges(),
                m.label(pv),
                m.label(p2v)
            ),
        )?;
        let report = self_failure_check(h, &PWordOptions::default()).map_err(|e| e.to_string())?;
        ensure(
            report.status == Outcome::Confirmed,
            "self_failure_check status",
        )?;
        let took = start.elapsed();
        ensure(
            took < Duration::from_secs(10),
            format!("{:?} took {took:?}", h.edges()),
        )?;
        worst = worst.max(took);
    }
    Ok(format!(
        "{} bundles, slowest {:.2}s",
        sweep.len(),
        worst.as_secs_f64()
    ))
}

fn c8() -> Check {
    let (x, y) = (Letter::x(0), Letter::x(1));
    let xy = Word::new(vec![x, y]);
    let a = b21_image_classification(2, ImageShape::Xyxy, 8).map_err(|e| e.to_string())?;
    let want: Vec<Word> = (2..=4).map(|h| xy.pow(h)).collect();
    ensure(
        a.satisfied == want,
        format!(
            "xyxy gives {:?}",
            a.satisfied
                .iter()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
        ),
    )?;
    let b = b21_image_classification(2, ImageShape::Xyxyx, 8).map_err(|e| e.to_string())?;
    let want: Vec<Word> = (2..=3)
        .map(|h| xy.pow(h).concat(&Word::new(vec![x])))
        .collect();
    ensure(
        b.satisfied == want,
        format!(
            "xyxyx gives {:?}",
            b.satisfied
                .iter()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
        ),
    )?;
    Ok(format!("{} candidates per shape", a.candidates))
}

fn c9() -> Check {
    let r = wn_isoterm_experiment(3, &WnOptions::default()).map_err(|e| e.to_string())?;
    let d = &r.details;
    ensure(
        d["candidates"] == 415_800,
        format!("candidates {}", d["candidates"]),
    )?;
    let w3 = w_n(3).unwrap();
    let survivors: Vec<String> =
        serde_json::from_value(d["survivors"].clone()).map_err(|e| e.to_string())?;
    ensure(
        survivors == vec![w3.to_string()],
        format!("survivors {survivors:?}"),
    )?;
    ensure(r.status == Outcome::Confirmed, "status")?;
    Ok(format!(
        "415800 rearrangements, {} battery survivors, 1 survivor",
        d["battery_survivors"]
    ))
}

fn c10() -> Check {
    let (x, y) = (Letter::x(0), Letter::Z);
    let id = Identity::new(Word::new(vec![x, x, y]), Word::new(vec![y, x, x]));
    let mut total = 0;
    for n in [3, 5, 7] {
        let w = w_n(n).unwrap();
        let apps = find_rewrite_applications(&w, &id, 5).map_err(|e| e.to_string())?;
        ensure(
            !apps.iter().any(|a| a.nontrivial),
            format!("nontrivial application in w{n}"),
        )?;
        ensure(
            !apps.iter().any(|a| !a.theta.image(x).is_empty()),
            format!("x has a nonempty image in w{n}"),
        )?;
        total += apps.len();
    }
    Ok(format!("{total} applications, none nontrivial"))
}

fn c11() -> Check {
    let (u, v) = (w_n(3).unwrap(), w_n_prime(3).unwrap());
    ensure(zimin_criterion(&u, &v), "criterion false")?;
    let z4 = zimin_monoid(4).map_err(|e| e.to_string())?;
    let verdict = satisfies_with(
        &z4.monoid,
        &Identity::new(u, v),
        &SatisfyOptions {
            strategy: Strategy::Randomized {
                samples: 1_000_000,
                seed: 11,
            },
            ..SatisfyOptions::default()
        },
    )
    .map_err(|e| e.to_string())?;
    ensure(!verdict.is_refuted(), format!("counterexample {verdict:?}"))?;
    let fixtures = realization_fixtures().map_err(|e| e.to_string())?;
    for case in ["ii", "iv"] {
        let f = fixtures
            .iter()
            .find(|f| f.case == case)
            .ok_or(format!("fixture {case} missing"))?;
        let c = check_fixture(f).map_err(|e| e.to_string())?;
        ensure(
            c.image_matches && c.is_factor && c.whole,
            format!("fixture {case}: {c:?}"),
        )?;
        let mut names = NameTable::new();
        let image = names.parse_word(&f.image).map_err(|e| e.to_string())?;
        ensure(
            brandt_core::words::zimin(f.n).has_factor(&image),
            format!("fixture {case} not a factor"),
        )?;
    }
    Ok("10^6 samples in M(z4), 0 counterexamples; fixtures ii, iv".into())
}

fn reports() -> Vec<String> {
    let edge = single_edge();
    let path = Hypergraph::from_edges(5, &[[0, 1, 2], [2, 3, 4]]).unwrap();
    let wn = wn_isoterm_experiment(
        3,
        &WnOptions {
            mode: WnMode::Sampled { samples: 20_000 },
            seed: 5,
            ..WnOptions::default()
        },
    )
    .unwrap();
    let cross = cross_satisfaction_check(
        &edge,
        &path,
        &CrossOptions {
            samples: 20_000,
            seed: 9,
            ..CrossOptions::default()
        },
    )
    .unwrap();
    let z = zimin_monoid(3).unwrap();
    let random = satisfies_with(
        &z.monoid,
        &Identity::new(w_n(3).unwrap(), w_n_prime(3).unwrap()),
        &SatisfyOptions {
            strategy: Strategy::Randomized {
                samples: 20_000,
                seed: 4,
            },
            ..SatisfyOptions::default()
        },
    )
    .unwrap();
    let generated = generate_high_girth(&GenerateConfig::new(9, 4, 7)).unwrap();
    vec![
        serde_json::to_string(&wn).unwrap(),
        serde_json::to_string(&cross).unwrap(),
        serde_json::to_string(&random).unwrap(),
        serde_json::to_string(&self_failure_check(&path, &PWordOptions::default()).unwrap())
            .unwrap(),
        serde_json::to_string(&b21_witness(&path, WitnessOptions::default()).unwrap()).unwrap(),
        serde_json::to_string(&a21_witness(&edge, WitnessOptions::default()).unwrap()).unwrap(),
        generated.hypergraph.to_json(),
        build(&path, Variant::Full).unwrap().monoid().to_json(),
    ]
}

fn c12() -> Check {
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(reports)
    };
    let base = run(1);
    for threads in [1, 2, 4] {
        let again = run(threads);
        ensure(
            again == base,
            format!("reports differ at {threads} workers"),
        )?;
    }
    Ok(format!(
        "{} reports identical at 1, 2 and 4 workers",
        base.len()
    ))
}

fn main() {
    let sweep = sweep();
    let criteria: Vec<(&str, Box<dyn Fn() -> Check + '_>)> = vec![
        ("presentation fidelity", Box::new(c1)),
        ("girth and conditions", Box::new(c2)),
        ("normal-form soundness", Box::new(|| c3(&sweep))),
        ("full-variant structure", Box::new(|| c4(&sweep))),
        ("A21 membership witness", Box::new(c5)),
        ("B21 membership witness", Box::new(c6)),
        ("self-failure of p_H", Box::new(|| c7(&sweep))),
        ("image classification", Box::new(c8)),
        ("w3 isoterm", Box::new(c9)),
        ("square-free rewriting", Box::new(c10)),
        ("Zimin suite", Box::new(c11)),
        ("determinism", Box::new(c12)),
    ];
    let limits = [1, 30, 300, 420, 120, 720, 1400, 60, 900, 60, 300, 600];
    let mut failed = 0;
    for (i, ((name, f), limit)) in criteria.iter().zip(limits).enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f))
            .unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let result = result.and_then(|m| {
            if took > Duration::from_secs(limit) {
                Err(format!(
                    "{m}; took {:.1}s, limit {limit}s",
                    took.as_secs_f64()
                ))
            } else {
                Ok(m)
            }
        });
        match result {
            Ok(m) => println!(
                "criterion {:>2} PASS {name} ({:.2}s): {m}",
                i + 1,
                took.as_secs_f64()
            ),
            Err(m) => {
                failed += 1;
                println!(
                    "criterion {:>2} FAIL {name} ({:.2}s): {m}",
                    i + 1,
                    took.as_secs_f64()
                );
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
