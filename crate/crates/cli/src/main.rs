mod grammar;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use brandt_core::finmon::{
    brandt_a21, brandt_b21, satisfies_with, zimin_monoid, Assignment, FinMonoid, Identity,
    SatisfyOptions, Strategy, Verdict,
};
use brandt_core::hypergraph::{generate_high_girth, GenerateConfig, Hypergraph, HypergraphFile};
use brandt_core::hypermon::{
    a21_witness, b21_inside, b21_witness, build, commuting_idempotents_check, idempotent_profile,
    majority_necessity_experiment, Variant, WitnessOptions, WitnessStatus,
};
use brandt_core::identities::{
    b21_image_classification, check_fixture, cross_satisfaction_check, find_rewrite_applications,
    realization_fixtures, self_failure_check, wn_isoterm_experiment, zimin_criterion_experiment,
    CrossOptions, ImageShape, Outcome, PWordOptions, PlanStrategy, ReportRow, SeparationReport,
    WnMode, WnOptions,
};
use brandt_core::words::NameTable;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

/// Batch workbench for Brandt-type monoids built from 3-uniform hypergraphs.
#[derive(Parser, Debug)]
#[command(name = "brandt", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Serialize)]
struct Global {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on assignments enumerated by exhaustive identity checks.
    #[arg(long, global = true, default_value_t = 100_000_000, value_parser = positive_u128)]
    budget_assignments: u128,
    /// Cap on elements generated by direct-power closures.
    #[arg(long, global = true, default_value_t = 100_000, value_parser = positive_usize)]
    budget_elements: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; never changes the output.
    #[arg(long, global = true, value_parser = positive_usize)]
    #[serde(skip)]
    workers: Option<usize>,
    /// Record wall time in reports.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
enum Command {
    /// Build a hypergraph monoid and write its table and labels.
    Build {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "full", value_parser = parse_variant)]
        variant: Variant,
        /// Directory for `<stem>.<variant>.monoid.json` and `.labels.json`.
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },
    /// Check an identity in a finite monoid.
    Check {
        /// b21, a21, trivial, zimin:<n>, <variant>:<hypergraph.json> or a monoid JSON file.
        #[arg(long, default_value = "b21")]
        monoid: String,
        #[arg(long)]
        id: String,
        #[arg(long, value_enum, default_value_t = CheckStrategy::Exhaustive)]
        strategy: CheckStrategy,
        #[arg(long, default_value_t = 100_000, value_parser = positive_u64)]
        samples: u64,
    },
    /// Run a named experiment and emit its report.
    Experiment {
        #[command(subcommand)]
        experiment: Experiment,
    },
    /// Generate a random 3-uniform hypergraph of large girth.
    Gen {
        #[arg(long = "v")]
        vertices: usize,
        #[arg(long, default_value_t = 4)]
        girth: u32,
        #[arg(long, default_value_t = 1000, value_parser = positive_usize)]
        attempts: usize,
        /// Stop at this many edges; falling short is a budget failure.
        #[arg(long)]
        edges: Option<usize>,
    },
    /// Validate a hypergraph or monoid file and describe it.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Auto)]
        kind: Kind,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum CheckStrategy {
    Exhaustive,
    Randomized,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Auto,
    Hypergraph,
    Monoid,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Permutation,
    Sampled,
    Bounded,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "experiment")]
enum Experiment {
    /// M_H fails p_H = p_H^2.
    SelfFailure {
        #[arg(long = "in")]
        input: PathBuf,
        /// Use every ordering of the single hyperedge as the block list.
        #[arg(long)]
        permutations: bool,
        #[arg(long)]
        no_prune: bool,
    },
    /// Does M_H satisfy p_G = p_G^2?
    Cross {
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        h: PathBuf,
        #[arg(long, default_value_t = 1_000_000, value_parser = positive_u64)]
        samples: u64,
    },
    /// w_n is the only rearrangement of itself that B21 cannot tell apart.
    WnIsoterm {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Mode::Permutation)]
        mode: Mode,
        #[arg(long, default_value_t = 100_000, value_parser = positive_u64)]
        samples: u64,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
    /// Words equal in B21 to the image of xyxy or xyxyx.
    ImageClassification {
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value = "xyxy", value_parser = parse_shape)]
        shape: ImageShape,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
    /// Zimin criterion against a check in M(z_n).
    ZiminCriterion {
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, default_value_t = 100_000, value_parser = positive_u64)]
        samples: u64,
    },
    /// Direct-power witness over A21.
    A21 {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Direct-power witness over B21 indexed by majority colourings.
    B21 {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Majority colourability against the B21 witness and p_H.
    Necessity {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Idempotents, commutation and the B21 copy in the full monoid.
    Lemmas {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// One-step rewrites of a word by an identity.
    Rewrite {
        #[arg(long)]
        w: String,
        #[arg(long)]
        id: String,
        #[arg(long, default_value_t = 3)]
        max_image_len: usize,
    },
    /// Replay the stored Zimin realizations.
    Realization,
}

fn positive<T: std::str::FromStr + PartialEq + Default>(s: &str) -> std::result::Result<T, String> {
    match s.parse::<T>() {
        Ok(v) if v != T::default() => Ok(v),
        Ok(_) => Err("must be positive".into()),
        Err(_) => Err(format!("not a number: {s}")),
    }
}

fn positive_u128(s: &str) -> std::result::Result<u128, String> {
    positive(s)
}

fn positive_u64(s: &str) -> std::result::Result<u64, String> {
    positive(s)
}

fn positive_usize(s: &str) -> std::result::Result<usize, String> {
    positive(s)
}

fn parse_variant(s: &str) -> std::result::Result<Variant, String> {
    s.parse().map_err(|e: brandt_core::Error| e.to_string())
}

fn parse_shape(s: &str) -> std::result::Result<ImageShape, String> {
    s.parse().map_err(|e: brandt_core::Error| e.to_string())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum Status {
    Ok,
    Satisfied,
    Refuted,
    Confirmed,
    Falsified,
    Inconclusive,
    Refused,
    Exhausted,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Ok | Status::Satisfied | Status::Confirmed => 0,
            Status::Refuted | Status::Falsified => 1,
            Status::Refused => 3,
            Status::Inconclusive => 4,
            Status::Exhausted => 5,
        }
    }

    fn of(o: Outcome) -> Status {
        match o {
            Outcome::Satisfied => Status::Satisfied,
            Outcome::Refuted => Status::Refuted,
            Outcome::Inconclusive => Status::Inconclusive,
            Outcome::Confirmed => Status::Confirmed,
            Outcome::Falsified => Status::Falsified,
        }
    }

    fn confirmed(ok: bool) -> Status {
        if ok {
            Status::Confirmed
        } else {
            Status::Falsified
        }
    }
}

enum Body {
    Separation(SeparationReport),
    Value(Value),
    /// Emitted verbatim (generated hypergraphs).
    Raw(String),
}

struct Output {
    status: Status,
    body: Body,
}

impl Output {
    fn value(status: Status, v: Value) -> Output {
        Output {
            status,
            body: Body::Value(v),
        }
    }

    fn separation(r: SeparationReport) -> Output {
        Output {
            status: Status::of(r.status),
            body: Body::Separation(r),
        }
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Build { .. } => "build".into(),
        Command::Check { .. } => "check".into(),
        Command::Gen { .. } => "gen".into(),
        Command::Validate { .. } => "validate".into(),
        Command::Experiment { experiment } => {
            let v = serde_json::to_value(experiment).expect("config serializes");
            format!("experiment {}", v["experiment"].as_str().unwrap_or("?"))
        }
    }
}

fn load_hypergraph(path: &Path) -> Result<Hypergraph> {
    Hypergraph::load_json(path).with_context(|| format!("loading {}", path.display()))
}

fn witness_options(g: &Global) -> WitnessOptions {
    WitnessOptions {
        element_cap: g.budget_elements,
        ..WitnessOptions::default()
    }
}

fn resolve_monoid(spec: &str) -> Result<FinMonoid> {
    Ok(match spec {
        "b21" => brandt_b21(),
        "a21" => brandt_a21(),
        "trivial" => FinMonoid::trivial(),
        _ => {
            if let Some(n) = spec.strip_prefix("zimin:") {
                let n: u32 = n
                    .parse()
                    .map_err(|_| brandt_core::Error::Parse(format!("bad Zimin index {n:?}")))?;
                zimin_monoid(n)?.monoid
            } else if let Some((v, file)) = spec
                .split_once(':')
                .filter(|(v, _)| v.parse::<Variant>().is_ok())
            {
                let variant: Variant = v.parse()?;
                build(&load_hypergraph(Path::new(file))?, variant)?
                    .monoid()
                    .clone()
            } else {
                FinMonoid::load(spec).with_context(|| format!("loading monoid {spec}"))?
            }
        }
    })
}

fn named_assignment(m: &FinMonoid, names: &NameTable, theta: &Assignment) -> String {
    theta
        .iter()
        .map(|(l, e)| format!("{}={}", names.name(l), m.label(e)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn cmd_check(
    g: &Global,
    monoid: &str,
    id: &str,
    strategy: CheckStrategy,
    samples: u64,
) -> Result<Output> {
    let mut names = NameTable::new();
    let identity: Identity = grammar::parse_identity(id, &mut names)?;
    let m = resolve_monoid(monoid)?;
    let strategy = match strategy {
        CheckStrategy::Exhaustive => Strategy::Exhaustive,
        CheckStrategy::Randomized => Strategy::Randomized {
            samples,
            seed: g.seed,
        },
    };
    let verdict = satisfies_with(
        &m,
        &identity,
        &SatisfyOptions {
            strategy,
            budget: g.budget_assignments,
            order: None,
        },
    )?;
    let shown = format!(
        "{} = {}",
        names.format_word(&identity.lhs),
        names.format_word(&identity.rhs)
    );
    let row = match &verdict {
        Verdict::Satisfied { .. } => ReportRow::new(monoid, shown, Outcome::Satisfied),
        Verdict::Refuted {
            counterexample,
            lhs_value,
            rhs_value,
        } => ReportRow::new(monoid, shown, Outcome::Refuted).with_witness(format!(
            "{} ({} vs {})",
            named_assignment(&m, &names, counterexample),
            m.label(*lhs_value),
            m.label(*rhs_value)
        )),
        Verdict::Inconclusive { samples, seed } => {
            let mut r = ReportRow::new(monoid, shown, Outcome::Inconclusive);
            r.samples = Some(*samples);
            r.seed = Some(*seed);
            r
        }
    };
    let status = row.verdict;
    Ok(Output::separation(SeparationReport {
        experiment: "check".into(),
        claim: "the monoid satisfies the identity".into(),
        status,
        rows: vec![row],
        details: json!({ "monoid_size": m.size(), "verdict": verdict }),
    }))
}

fn cmd_build(input: &Path, variant: Variant, dir: &Path) -> Result<Output> {
    let h = load_hypergraph(input)?;
    let b = build(&h, variant)?;
    let stem = input
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("hypergraph");
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let monoid_file = dir.join(format!("{stem}.{variant}.monoid.json"));
    let labels_file = dir.join(format!("{stem}.{variant}.labels.json"));
    fs::write(&monoid_file, b.monoid().to_json() + "\n")?;
    fs::write(&labels_file, b.labels_json() + "\n")?;
    Ok(Output::value(
        Status::Ok,
        json!({
            "variant": variant,
            "size": b.size(),
            "vertices": h.vertex_count(),
            "edges": h.edge_count(),
            "girth": h.girth().to_string(),
            "idempotents": b.monoid().idempotents().len(),
            "monoid_file": monoid_file,
            "labels_file": labels_file,
        }),
    ))
}

fn cmd_gen(
    g: &Global,
    vertices: usize,
    girth: u32,
    attempts: usize,
    edges: Option<usize>,
) -> Result<Output> {
    let config = GenerateConfig {
        attempts,
        target_edges: edges,
        ..GenerateConfig::new(vertices, girth, g.seed)
    };
    let generated = generate_high_girth(&config)?;
    let file = HypergraphFile::from_generated(&generated, g.seed, girth, attempts);
    let status = if generated.exhausted {
        Status::Exhausted
    } else {
        Status::Ok
    };
    Ok(Output {
        status,
        body: Body::Raw(file.to_json() + "\n"),
    })
}

fn describe_hypergraph(h: &Hypergraph) -> Value {
    let c = h.check_conditions();
    json!({
        "kind": "hypergraph",
        "vertices": h.vertex_count(),
        "edges": h.edge_count(),
        "girth": h.girth().to_string(),
        "conditions": c,
        "isolated": h.isolated_vertices().iter().map(|&v| h.name(v)).collect::<Vec<_>>(),
        "hyperforest": h.is_hyperforest(),
        "chromatic_number": h.chromatic_number(),
        "majority_colourable": h.has_majority_colouring(),
        "flex_conditions": h.flex_conditions(),
        "buildable": h.isolated_vertices().is_empty() && c.one && c.two,
    })
}

fn describe_monoid(m: &FinMonoid) -> Value {
    json!({
        "kind": "monoid",
        "size": m.size(),
        "identity": m.label(m.identity()),
        "zero": m.zero().map(|z| m.label(z).to_string()),
        "idempotents": m.idempotents().len(),
        "generators": m.generating_set().len(),
    })
}

fn cmd_validate(input: &Path, kind: Kind) -> Result<Output> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let v = match kind {
        Kind::Hypergraph => describe_hypergraph(&Hypergraph::parse_json(&text)?),
        Kind::Monoid => describe_monoid(&FinMonoid::from_json(&text)?),
        Kind::Auto => {
            let shape: Value = serde_json::from_str(&text)
                .map_err(|e| brandt_core::Error::Parse(e.to_string()))?;
            if shape.get("edges").is_some() {
                describe_hypergraph(&Hypergraph::parse_json(&text)?)
            } else {
                describe_monoid(&FinMonoid::from_json(&text)?)
            }
        }
    };
    Ok(Output::value(Status::Ok, v))
}

fn cmd_experiment(g: &Global, e: &Experiment) -> Result<Output> {
    Ok(match e {
        Experiment::SelfFailure {
            input,
            permutations,
            no_prune,
        } => {
            let opts = PWordOptions {
                strategy: if *permutations {
                    PlanStrategy::Permutations
                } else {
                    PlanStrategy::Greedy
                },
                prune: !no_prune,
            };
            Output::separation(self_failure_check(&load_hypergraph(input)?, &opts)?)
        }
        Experiment::Cross {
            g: gp,
            h: hp,
            samples,
        } => {
            let opts = CrossOptions {
                budget: g.budget_assignments,
                samples: *samples,
                seed: g.seed,
                ..CrossOptions::default()
            };
            Output::separation(cross_satisfaction_check(
                &load_hypergraph(gp)?,
                &load_hypergraph(hp)?,
                &opts,
            )?)
        }
        Experiment::WnIsoterm {
            n,
            mode,
            samples,
            max_len,
        } => {
            let mode = match mode {
                Mode::Permutation => WnMode::Permutation,
                Mode::Sampled => WnMode::Sampled { samples: *samples },
                Mode::Bounded => WnMode::Bounded { max_len: *max_len },
            };
            let opts = WnOptions {
                mode,
                seed: g.seed,
                ..WnOptions::default()
            };
            Output::separation(wn_isoterm_experiment(*n, &opts)?)
        }
        Experiment::ImageClassification { k, shape, max_len } => {
            let c = b21_image_classification(*k, *shape, *max_len)?;
            let words = |ws: &[brandt_core::words::Word]| {
                ws.iter().map(|w| w.to_string()).collect::<Vec<_>>()
            };
            Output::value(
                Status::confirmed(c.matches),
                json!({
                    "k": c.k,
                    "shape": c.shape,
                    "max_len": c.max_len,
                    "candidates": c.candidates,
                    "satisfied": words(&c.satisfied),
                    "expected": words(&c.expected),
                    "matches": c.matches,
                }),
            )
        }
        Experiment::ZiminCriterion { u, v, n, samples } => {
            let mut names = NameTable::new();
            let u = grammar::parse_side(u, &mut names)?;
            let v = grammar::parse_side(v, &mut names)?;
            Output::separation(zimin_criterion_experiment(
                &u,
                &v,
                *n,
                *samples,
                g.seed,
                g.budget_assignments,
            )?)
        }
        Experiment::A21 { input } => {
            let w = a21_witness(&load_hypergraph(input)?, witness_options(g))?;
            Output::value(Status::confirmed(w.verified), serde_json::to_value(&w)?)
        }
        Experiment::B21 { input } => {
            let w = b21_witness(&load_hypergraph(input)?, witness_options(g))?;
            let status = match w.status {
                WitnessStatus::Verified => Status::Confirmed,
                WitnessStatus::Refused { .. } => Status::Refused,
            };
            Output::value(status, serde_json::to_value(&w)?)
        }
        Experiment::Necessity { input } => {
            let r = majority_necessity_experiment(&load_hypergraph(input)?, witness_options(g))?;
            Output::value(Status::confirmed(r.consistent), serde_json::to_value(&r)?)
        }
        Experiment::Lemmas { input } => {
            let b = build(&load_hypergraph(input)?, Variant::Full)?;
            let idem = idempotent_profile(&b)?;
            let comm = commuting_idempotents_check(&b)?;
            let inside = b21_inside(&b)?;
            let ok = idem.idempotents.len() == idem.predicted
                && comm.commute
                && comm.trichotomy
                && comm.x2y2_law
                && inside.size == 6;
            Output::value(
                Status::confirmed(ok),
                json!({ "size": b.size(), "idempotents": idem, "commuting": comm, "b21_inside": inside }),
            )
        }
        Experiment::Rewrite {
            w,
            id,
            max_image_len,
        } => {
            let mut names = NameTable::new();
            let word = grammar::parse_side(w, &mut names)?;
            let identity = grammar::parse_identity(id, &mut names)?;
            let apps = find_rewrite_applications(&word, &identity, *max_image_len)?;
            let shown: Vec<Value> = apps
                .iter()
                .map(|a| {
                    let theta: Vec<String> = a
                        .theta
                        .iter()
                        .map(|(l, img)| format!("{}->{}", names.name(*l), names.format_word(img)))
                        .collect();
                    json!({ "position": a.position, "theta": theta.join(", "), "nontrivial": a.nontrivial })
                })
                .collect();
            let nontrivial = apps.iter().filter(|a| a.nontrivial).count();
            Output::value(
                Status::Ok,
                json!({
                    "word": names.format_word(&word),
                    "applications": shown.len(),
                    "nontrivial": nontrivial,
                    "list": shown,
                }),
            )
        }
        Experiment::Realization => {
            let checks = realization_fixtures()?
                .iter()
                .map(check_fixture)
                .collect::<brandt_core::Result<Vec<_>>>()?;
            let ok = checks
                .iter()
                .all(|c| c.image_matches && c.is_factor && c.whole);
            Output::value(Status::confirmed(ok), json!({ "fixtures": checks }))
        }
    })
}

fn seeds(c: &Command, g: &Global) -> Vec<u64> {
    match c {
        Command::Build { .. } | Command::Validate { .. } => vec![],
        _ => vec![g.seed],
    }
}

fn render(cli: &Cli, out: &mut Output, elapsed_ms: Option<u64>) -> Result<String> {
    let g = &cli.global;
    if let (Some(ms), Body::Separation(r)) = (elapsed_ms, &mut out.body) {
        for row in &mut r.rows {
            row.time_ms.get_or_insert(ms);
        }
    }
    let name = command_name(&cli.command);
    let version = env!("CARGO_PKG_VERSION");
    let status = serde_json::to_value(out.status)?;
    let status = status.as_str().unwrap_or_default();
    Ok(match (&out.body, g.format) {
        (Body::Raw(text), _) => text.clone(),
        (body, Format::Json) => {
            let report = match body {
                Body::Separation(r) => serde_json::to_value(r)?,
                Body::Value(v) => v.clone(),
                Body::Raw(_) => unreachable!(),
            };
            let mut env = json!({
                "tool": "brandt",
                "version": version,
                "command": name,
                "config": { "global": g, "command": &cli.command },
                "seeds": seeds(&cli.command, g),
                "status": status,
                "report": report,
            });
            if let Some(ms) = elapsed_ms {
                env["time_ms"] = json!(ms);
            }
            serde_json::to_string_pretty(&env)? + "\n"
        }
        (body, Format::Table) => {
            let mut s = format!("brandt {version} {name} seed={} status={status}\n", g.seed);
            match body {
                Body::Separation(r) => {
                    s.push_str(&r.to_table());
                    for (k, x) in r.details.as_object().into_iter().flatten() {
                        if matches!(x, Value::Bool(_) | Value::Number(_) | Value::String(_)) {
                            s.push_str(&format!("{k}: {x}\n"));
                        }
                    }
                }
                Body::Value(v) => {
                    for (k, x) in v.as_object().into_iter().flatten() {
                        let shown = match x {
                            Value::String(t) => t.clone(),
                            other => other.to_string(),
                        };
                        s.push_str(&format!("{k}: {shown}\n"));
                    }
                }
                Body::Raw(_) => unreachable!(),
            }
            if let Some(ms) = elapsed_ms {
                s.push_str(&format!("time_ms: {ms}\n"));
            }
            s
        }
        (body, Format::Csv) => match body {
            Body::Separation(r) => r.to_csv()?,
            Body::Value(v) => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["key", "value"])?;
                for (k, x) in v.as_object().into_iter().flatten() {
                    let shown = match x {
                        Value::String(t) => t.clone(),
                        other => other.to_string(),
                    };
                    w.write_record([k.as_str(), shown.as_str()])?;
                }
                String::from_utf8(w.into_inner()?)?
            }
            Body::Raw(_) => unreachable!(),
        },
    })
}

fn run(cli: &Cli) -> Result<u8> {
    let g = &cli.global;
    if let Some(n) = g.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    let start = Instant::now();
    let mut out = match &cli.command {
        Command::Build {
            input,
            variant,
            dir,
        } => cmd_build(input, *variant, dir)?,
        Command::Check {
            monoid,
            id,
            strategy,
            samples,
        } => cmd_check(g, monoid, id, *strategy, *samples)?,
        Command::Experiment { experiment } => cmd_experiment(g, experiment)?,
        Command::Gen {
            vertices,
            girth,
            attempts,
            edges,
        } => cmd_gen(g, *vertices, *girth, *attempts, *edges)?,
        Command::Validate { input, kind } => cmd_validate(input, *kind)?,
    };
    let elapsed = g.timing.then(|| start.elapsed().as_millis() as u64);
    let text = render(cli, &mut out, elapsed)?;
    match &g.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    if out.status == Status::Exhausted {
        eprintln!("brandt: attempt budget ran out before the edge target; output is best effort");
    }
    Ok(out.status.code())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    use brandt_core::Error as E;
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<E>() {
            return match err {
                E::Precondition(_) | E::EquivalenceUndefined { .. } => 3,
                E::Budget { .. } => 5,
                E::Falsified(_) => 1,
                _ => 2,
            };
        }
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("brandt: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
