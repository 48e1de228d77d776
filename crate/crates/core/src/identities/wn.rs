use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::report::{format_assignment, Outcome, ReportRow, SeparationReport};
use crate::error::{Error, Result};
use crate::finmon::{
    brandt_b21, isoterm_search, satisfies, satisfies_with, Battery, Identity, IsotermOptions,
    SatisfyOptions, Strategy,
};
use crate::words::{w_n, w_n_prime, Letter, Word};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum WnMode {
    /// Every rearrangement of the letters of `w_n`.
    Permutation,
    /// `samples` random rearrangements.
    Sampled { samples: u64 },
    /// All words up to `max_len` via the isoterm search.
    Bounded { max_len: usize },
}

#[derive(Clone, Copy, Debug)]
pub struct WnOptions {
    pub mode: WnMode,
    pub seed: u64,
    pub battery: usize,
    /// Bound on the number of rearrangements in permutation mode.
    pub candidate_budget: u128,
}

impl Default for WnOptions {
    fn default() -> Self {
        WnOptions {
            mode: WnMode::Permutation,
            seed: 0,
            battery: 256,
            candidate_budget: 10_000_000,
        }
    }
}

/// Number of distinct rearrangements of a multiset with these counts.
pub fn multinomial(counts: &[usize]) -> u128 {
    let mut total = 0usize;
    let mut acc: u128 = 1;
    for &c in counts {
        for i in 1..=c {
            total += 1;
            acc = acc * total as u128 / i as u128;
        }
    }
    acc
}

fn next_permutation(xs: &mut [usize]) -> bool {
    let Some(i) = xs.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = xs
        .iter()
        .rposition(|&x| x > xs[i])
        .expect("pivot has a successor");
    xs.swap(i, j);
    xs[i + 1..].reverse();
    true
}

/// The `rank`-th rearrangement of the multiset in lexicographic order.
fn unrank(mut counts: Vec<usize>, mut rank: u128) -> Vec<usize> {
    let len: usize = counts.iter().sum();
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        for s in 0..counts.len() {
            if counts[s] == 0 {
                continue;
            }
            counts[s] -= 1;
            let below = multinomial(&counts);
            if rank < below {
                out.push(s);
                break;
            }
            rank -= below;
            counts[s] += 1;
        }
    }
    out
}

const CHUNK: u128 = 1 << 14;

/// Checks that `w_n` is the only rearrangement `w'` of itself with
/// `B₂¹ ⊨ w_n ≈ w'` (or, in bounded mode, the only word up to a length).
pub fn wn_isoterm_experiment(n: u32, options: &WnOptions) -> Result<SeparationReport> {
    let w = w_n(n)?;
    let letters: Vec<Letter> = w.content().into_iter().collect();
    let index = |l: Letter| letters.binary_search(&l).expect("letter in content");
    let target: Vec<usize> = w.iter().map(index).collect();
    let counts: Vec<usize> = letters.iter().map(|&l| w.occurrences(l)).collect();
    let m = brandt_b21();
    let battery = Battery::new(&m, letters.len(), &target, options.battery, options.seed);
    let to_word = |c: &[usize]| -> Word { c.iter().map(|&i| letters[i]).collect() };
    let identity = format!("w{n} = w'");
    if let WnMode::Bounded { max_len } = options.mode {
        let r = isoterm_search(
            &m,
            &w,
            max_len,
            &IsotermOptions {
                seed: options.seed,
                battery: options.battery,
                ..IsotermOptions::default()
            },
        )?;
        let (status, verdict) = match r.witness() {
            None => (Outcome::Confirmed, Outcome::Refuted),
            Some(_) => (Outcome::Falsified, Outcome::Satisfied),
        };
        let mut row = ReportRow::new(format!("n={n}"), identity, verdict);
        row.witness = r.witness().map(|x| x.to_string());
        return Ok(SeparationReport {
            experiment: "wn-isoterm".into(),
            claim: format!("w{n} is an isoterm for B21 up to length {max_len}"),
            status,
            rows: vec![row],
            details: serde_json::to_value(&r)?,
        });
    }
    let total = multinomial(&counts);
    let candidates: Vec<Vec<usize>> = match options.mode {
        WnMode::Permutation => {
            if total > options.candidate_budget {
                return Err(Error::Budget {
                    what: "rearrangements of w_n",
                    needed: total,
                    budget: options.candidate_budget,
                    hint: "; use the sampled mode",
                });
            }
            let chunks = total.div_ceil(CHUNK) as u64;
            (0..chunks)
                .into_par_iter()
                .flat_map_iter(|c| {
                    let lo = c as u128 * CHUNK;
                    let hi = total.min(lo + CHUNK);
                    let mut cur = unrank(counts.clone(), lo);
                    let mut out = Vec::new();
                    for r in lo..hi {
                        if battery.passes(&cur) {
                            out.push(cur.clone());
                        }
                        if r + 1 < hi {
                            next_permutation(&mut cur);
                        }
                    }
                    out
                })
                .collect()
        }
        WnMode::Sampled { samples } => {
            const SAMPLE_CHUNK: u64 = 1 << 14;
            let chunks = samples.div_ceil(SAMPLE_CHUNK);
            (0..chunks)
                .into_par_iter()
                .flat_map_iter(|c| {
                    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
                    rng.set_stream(c + 1);
                    let k = SAMPLE_CHUNK.min(samples - c * SAMPLE_CHUNK);
                    let mut out = Vec::new();
                    let mut cur = target.clone();
                    for _ in 0..k {
                        cur.shuffle(&mut rng);
                        if battery.passes(&cur) {
                            out.push(cur.clone());
                        }
                    }
                    out
                })
                .collect()
        }
        WnMode::Bounded { .. } => unreachable!("handled above"),
    };
    let battery_survivors = candidates.len();
    let mut survivors: Vec<Vec<usize>> = Vec::new();
    for c in candidates {
        if survivors.contains(&c) {
            continue;
        }
        let id = Identity::new(w.clone(), to_word(&c));
        if satisfies_with(&m, &id, &SatisfyOptions::default())?.is_satisfied() {
            survivors.push(c);
        }
    }
    let sole = match options.mode {
        WnMode::Permutation => survivors == [target.clone()],
        _ => survivors.iter().all(|s| s == &target),
    };
    // the y/z swap must be refuted by an explicit assignment
    let swap = Identity::new(w.clone(), w_n_prime(n)?);
    let swap_verdict = satisfies(&m, &swap, Strategy::Exhaustive)?;
    let mut rows = vec![ReportRow::new(
        format!("n={n}"),
        identity,
        if sole {
            Outcome::Refuted
        } else {
            Outcome::Satisfied
        },
    )];
    if !sole {
        rows[0].witness = survivors
            .iter()
            .find(|&s| s != &target)
            .map(|s| to_word(s).to_string());
    }
    if let WnMode::Sampled { samples } = options.mode {
        rows[0].seed = Some(options.seed);
        rows[0].samples = Some(samples);
    }
    let mut swap_row = ReportRow::new(
        format!("n={n}"),
        format!("w{n} = w{n}'"),
        Outcome::Satisfied,
    );
    if let Some(c) = swap_verdict.counterexample() {
        swap_row = ReportRow::new(format!("n={n}"), format!("w{n} = w{n}'"), Outcome::Refuted)
            .with_witness(format_assignment(&m, c));
    }
    rows.push(swap_row);
    let status = match (sole && swap_verdict.is_refuted(), options.mode) {
        (false, _) => Outcome::Falsified,
        (true, WnMode::Sampled { .. }) => Outcome::Inconclusive,
        (true, _) => Outcome::Confirmed,
    };
    Ok(SeparationReport {
        experiment: "wn-isoterm".into(),
        claim: format!("w{n} is the only rearrangement of itself equal to w{n} in B21"),
        status,
        rows,
        details: json!({
            "n": n,
            "mode": options.mode,
            "candidates": match options.mode {
                WnMode::Sampled { samples } => samples as u128,
                _ => total,
            },
            "rearrangements": total,
            "battery": options.battery,
            "seed": options.seed,
            "battery_survivors": battery_survivors,
            "survivors": survivors.iter().map(|s| to_word(s).to_string()).collect::<Vec<_>>(),
        }),
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImageShape {
    /// `(xy)^k`
    Xyxy,
    /// `(xy)^k x`
    Xyxyx,
}

impl ImageShape {
    pub fn word(self, h: usize) -> Word {
        let (x, y) = (Letter::x(0), Letter::x(1));
        let mut w = Word::new(vec![x, y]).pow(h);
        if self == ImageShape::Xyxyx {
            w.push(x);
        }
        w
    }
}

impl std::str::FromStr for ImageShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "xyxy" => Ok(ImageShape::Xyxy),
            "xyxyx" => Ok(ImageShape::Xyxyx),
            _ => Err(Error::InvalidParameter(format!(
                "unknown shape {s:?} (expected xyxy or xyxyx)"
            ))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ImageClassification {
    pub k: usize,
    pub shape: ImageShape,
    pub max_len: usize,
    pub candidates: usize,
    pub satisfied: Vec<Word>,
    pub expected: Vec<Word>,
    pub matches: bool,
}

/// All `v` over `{x0, x1}` with `|v| ≤ max_len` and `B₂¹ ⊨ u ≈ v`, for
/// `u = (xy)^k` or `(xy)^k x`.
pub fn b21_image_classification(
    k: usize,
    shape: ImageShape,
    max_len: usize,
) -> Result<ImageClassification> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "k must be at least 2, got {k}"
        )));
    }
    if max_len > 24 {
        return Err(Error::Budget {
            what: "image classification candidates",
            needed: 1u128 << (max_len + 1),
            budget: 1 << 25,
            hint: "; lower max_len",
        });
    }
    let m = brandt_b21();
    let u = shape.word(k);
    let (x, y) = (Letter::x(0), Letter::x(1));
    let mut satisfied = Vec::new();
    let mut candidates = 0;
    for len in 0..=max_len {
        for bits in 0u32..1 << len {
            let v: Word = (0..len)
                .map(|i| if bits >> (len - 1 - i) & 1 == 0 { x } else { y })
                .collect();
            candidates += 1;
            let order = Some(vec![x, y]);
            let opts = SatisfyOptions {
                order,
                ..SatisfyOptions::default()
            };
            if satisfies_with(&m, &Identity::new(u.clone(), v.clone()), &opts)?.is_satisfied() {
                satisfied.push(v);
            }
        }
    }
    let extra = usize::from(shape == ImageShape::Xyxyx);
    let expected: Vec<Word> = (2..)
        .take_while(|h| 2 * h + extra <= max_len)
        .map(|h| shape.word(h))
        .collect();
    let matches = satisfied == expected;
    Ok(ImageClassification {
        k,
        shape,
        max_len,
        candidates,
        satisfied,
        expected,
        matches,
    })
}
