use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::identity::{satisfies_with, Identity, SatisfyOptions, Strategy};
use super::{Elem, FinMonoid};
use crate::error::{Error, Result};
use crate::words::{Letter, Word};

/// Random assignments used to reject candidates cheaply. Words are given
/// as indices into `letters`.
pub(crate) struct Battery<'a> {
    m: &'a FinMonoid,
    samples: Vec<Vec<Elem>>,
    target: Vec<Elem>,
}

impl<'a> Battery<'a> {
    pub(crate) fn new(
        m: &'a FinMonoid,
        letter_count: usize,
        word: &[usize],
        size: usize,
        seed: u64,
    ) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples: Vec<Vec<Elem>> = (0..size)
            .map(|_| {
                (0..letter_count)
                    .map(|_| rng.gen_range(0..m.size() as Elem))
                    .collect()
            })
            .collect();
        let target = samples.iter().map(|s| Self::eval(m, s, word)).collect();
        Battery { m, samples, target }
    }

    fn eval(m: &FinMonoid, values: &[Elem], word: &[usize]) -> Elem {
        word.iter()
            .fold(m.identity(), |acc, &i| m.mul(acc, values[i]))
    }

    /// True iff `candidate` agrees with the target word on every sample.
    pub(crate) fn passes(&self, candidate: &[usize]) -> bool {
        self.samples
            .iter()
            .zip(&self.target)
            .all(|(s, &t)| Self::eval(self.m, s, candidate) == t)
    }
}

#[derive(Clone, Debug)]
pub struct IsotermOptions {
    /// Candidate alphabet; defaults to the content of the word.
    pub alphabet: Option<Vec<Letter>>,
    /// Only consider candidates with the same content as the word.
    pub same_content: bool,
    pub battery: usize,
    pub seed: u64,
    /// Bound on the number of candidate words.
    pub candidate_budget: u128,
    /// Bound on each exhaustive check.
    pub assignment_budget: u128,
}

impl Default for IsotermOptions {
    fn default() -> Self {
        IsotermOptions {
            alphabet: None,
            same_content: true,
            battery: 64,
            seed: 0,
            candidate_budget: 50_000_000,
            assignment_budget: 100_000_000,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "result")]
pub enum IsotermResult {
    /// `M ⊨ w ≈ word`, found first in length-lexicographic order.
    Witness { word: Word, candidates: u128 },
    /// No identity `w ≈ w'` with `|w'| ≤ max_len` holds.
    NoWitness { max_len: usize, candidates: u128 },
}

impl IsotermResult {
    pub fn witness(&self) -> Option<&Word> {
        match self {
            IsotermResult::Witness { word, .. } => Some(word),
            IsotermResult::NoWitness { .. } => None,
        }
    }
}

const CHUNK: u64 = 1 << 12;

/// Searches words `w' != w` up to `max_len` for one with `M ⊨ w ≈ w'`.
pub fn isoterm_search(
    m: &FinMonoid,
    w: &Word,
    max_len: usize,
    options: &IsotermOptions,
) -> Result<IsotermResult> {
    let mut alphabet: Vec<Letter> = match &options.alphabet {
        Some(a) => a.clone(),
        None => w.content().into_iter().collect(),
    };
    alphabet.sort_unstable();
    alphabet.dedup();
    let mut letters = alphabet.clone();
    for l in w.iter() {
        if !letters.contains(&l) {
            letters.push(l);
        }
    }
    let index = |l: Letter| letters.iter().position(|&x| x == l).expect("letter listed");
    let target: Vec<usize> = w.iter().map(index).collect();
    let k = alphabet.len() as u64;
    let total: u128 = (0..=max_len as u32)
        .map(|n| (k as u128).checked_pow(n).unwrap_or(u128::MAX))
        .fold(0u128, |a, b| a.saturating_add(b));
    if total > options.candidate_budget {
        return Err(Error::Budget {
            what: "isoterm candidate enumeration",
            needed: total,
            budget: options.candidate_budget,
            hint: "; lower max_len",
        });
    }
    let mut need = vec![false; letters.len()];
    if options.same_content {
        for &i in &target {
            need[i] = true;
        }
    }
    let battery = Battery::new(m, letters.len(), &target, options.battery, options.seed);
    let check = SatisfyOptions {
        strategy: Strategy::Exhaustive,
        budget: options.assignment_budget,
        order: None,
    };
    let mut candidates = 0u128;
    for len in 0..=max_len {
        let count = k
            .checked_pow(len as u32)
            .expect("bounded by the candidate budget");
        let chunks = count.div_ceil(CHUNK).max(1);
        let survivors: Vec<Vec<usize>> = (0..chunks)
            .into_par_iter()
            .flat_map_iter(|c| {
                let lo = c * CHUNK;
                let hi = count.min(lo + CHUNK);
                let mut out = Vec::new();
                let mut word = vec![0usize; len];
                for code in lo..hi {
                    // most significant digit first gives lexicographic order
                    let mut rest = code;
                    for slot in word.iter_mut().rev() {
                        *slot = (rest % k) as usize;
                        rest /= k;
                    }
                    if word == target {
                        continue;
                    }
                    if options.same_content {
                        let mut has = vec![false; letters.len()];
                        for &i in &word {
                            has[i] = true;
                        }
                        if has != need {
                            continue;
                        }
                    }
                    if battery.passes(&word) {
                        out.push(word.clone());
                    }
                }
                out
            })
            .collect();
        candidates += count as u128;
        for cand in survivors {
            let cw: Word = cand.iter().map(|&i| letters[i]).collect();
            let id = Identity::new(w.clone(), cw.clone());
            if satisfies_with(m, &id, &check)?.is_satisfied() {
                return Ok(IsotermResult::Witness {
                    word: cw,
                    candidates,
                });
            }
        }
    }
    Ok(IsotermResult::NoWitness {
        max_len,
        candidates,
    })
}
