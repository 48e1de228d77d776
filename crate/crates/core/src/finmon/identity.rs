use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Elem, FinMonoid};
use crate::error::{Error, Result};
use crate::words::{Letter, Word};

/// An identity `lhs ≈ rhs`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Identity {
    pub lhs: Word,
    pub rhs: Word,
}

impl Identity {
    pub fn new(lhs: Word, rhs: Word) -> Self {
        Identity { lhs, rhs }
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }

    /// Letters of both sides in increasing order.
    pub fn variables(&self) -> Vec<Letter> {
        let mut c = self.lhs.content();
        c.extend(self.rhs.content());
        c.into_iter().collect()
    }

    pub fn swapped(&self) -> Identity {
        Identity::new(self.rhs.clone(), self.lhs.clone())
    }
}

/// Letters mapped to monoid elements.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment(pub BTreeMap<Letter, Elem>);

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Letter, Elem)>>(pairs: I) -> Self {
        Assignment(pairs.into_iter().collect())
    }

    pub fn insert(&mut self, letter: Letter, value: Elem) {
        self.0.insert(letter, value);
    }

    pub fn get(&self, letter: Letter) -> Option<Elem> {
        self.0.get(&letter).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Letter, Elem)> + '_ {
        self.0.iter().map(|(&l, &e)| (l, e))
    }
}

/// Value of `w` under `theta`; the empty word evaluates to the identity.
pub fn evaluate(m: &FinMonoid, theta: &Assignment, w: &Word) -> Result<Elem> {
    let mut acc = m.identity();
    for l in w.iter() {
        let v = theta.get(l).ok_or(Error::UncoveredLetter(l))?;
        if v as usize >= m.size() {
            return Err(Error::InvalidParameter(format!(
                "{l} assigned out-of-range element {v}"
            )));
        }
        acc = m.mul(acc, v);
    }
    Ok(acc)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Strategy {
    Exhaustive,
    Randomized { samples: u64, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct SatisfyOptions {
    pub strategy: Strategy,
    /// Upper bound on `size^variables` for the exhaustive strategy.
    pub budget: u128,
    /// Variable order for the search; defaults to first occurrence in
    /// `lhs` then `rhs`. Counterexamples are the first in this order.
    pub order: Option<Vec<Letter>>,
}

impl Default for SatisfyOptions {
    fn default() -> Self {
        SatisfyOptions {
            strategy: Strategy::Exhaustive,
            budget: 100_000_000,
            order: None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Verdict {
    /// Every assignment agrees (exhaustive strategy only).
    Satisfied { assignments: u128 },
    Refuted {
        counterexample: Assignment,
        lhs_value: Elem,
        rhs_value: Elem,
    },
    /// Randomized search found nothing; this is not a proof.
    Inconclusive { samples: u64, seed: u64 },
}

impl Verdict {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, Verdict::Satisfied { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn counterexample(&self) -> Option<&Assignment> {
        match self {
            Verdict::Refuted { counterexample, .. } => Some(counterexample),
            _ => None,
        }
    }
}

pub fn satisfies(m: &FinMonoid, id: &Identity, strategy: Strategy) -> Result<Verdict> {
    satisfies_with(
        m,
        id,
        &SatisfyOptions {
            strategy,
            ..SatisfyOptions::default()
        },
    )
}

pub fn satisfies_with(m: &FinMonoid, id: &Identity, options: &SatisfyOptions) -> Result<Verdict> {
    let problem = Problem::new(m, id, options.order.as_deref())?;
    let found = match options.strategy {
        Strategy::Exhaustive => {
            let space = (m.size() as u128)
                .checked_pow(problem.vars.len() as u32)
                .unwrap_or(u128::MAX);
            if space > options.budget {
                return Err(Error::Budget {
                    what: "exhaustive assignment enumeration",
                    needed: space,
                    budget: options.budget,
                    hint: "; use the randomized strategy",
                });
            }
            match problem.exhaustive() {
                Ok(count) => return Ok(Verdict::Satisfied { assignments: count }),
                Err(values) => values,
            }
        }
        Strategy::Randomized { samples, seed } => match problem.randomized(samples, seed) {
            None => return Ok(Verdict::Inconclusive { samples, seed }),
            Some(values) => values,
        },
    };
    let counterexample = Assignment::from_pairs(problem.vars.iter().copied().zip(found));
    let lhs_value = evaluate(m, &counterexample, &id.lhs)?;
    let rhs_value = evaluate(m, &counterexample, &id.rhs)?;
    if lhs_value == rhs_value {
        return Err(Error::Falsified("counterexample did not re-verify".into()));
    }
    Ok(Verdict::Refuted {
        counterexample,
        lhs_value,
        rhs_value,
    })
}

/// An identity compiled to variable indices.
struct Problem<'a> {
    m: &'a FinMonoid,
    vars: Vec<Letter>,
    sides: [Vec<usize>; 2],
    /// `runs[d][s]`: maximal blocks of side `s` over the first `d`
    /// variables that contain variable `d - 1`.
    runs: Vec<[Vec<(usize, usize)>; 2]>,
}

const UNSET: Elem = Elem::MAX;
const CHUNK: u64 = 1 << 14;

impl<'a> Problem<'a> {
    fn new(m: &'a FinMonoid, id: &Identity, order: Option<&[Letter]>) -> Result<Self> {
        let vars: Vec<Letter> = match order {
            Some(o) => {
                for v in id.variables() {
                    if !o.contains(&v) {
                        return Err(Error::UncoveredLetter(v));
                    }
                }
                let mut seen = std::collections::BTreeSet::new();
                o.iter().copied().filter(|l| seen.insert(*l)).collect()
            }
            None => {
                let mut vs = Vec::new();
                for l in id.lhs.iter().chain(id.rhs.iter()) {
                    if !vs.contains(&l) {
                        vs.push(l);
                    }
                }
                vs
            }
        };
        let index = |l: Letter| vars.iter().position(|&v| v == l).expect("variable listed");
        let sides = [
            id.lhs.iter().map(index).collect::<Vec<_>>(),
            id.rhs.iter().map(index).collect::<Vec<_>>(),
        ];
        let mut runs = vec![[Vec::new(), Vec::new()]];
        for d in 1..=vars.len() {
            let mut at = [Vec::new(), Vec::new()];
            for (s, side) in sides.iter().enumerate() {
                let mut i = 0;
                while i < side.len() {
                    if side[i] >= d {
                        i += 1;
                        continue;
                    }
                    let start = i;
                    while i < side.len() && side[i] < d {
                        i += 1;
                    }
                    if side[start..i].contains(&(d - 1)) {
                        at[s].push((start, i));
                    }
                }
            }
            runs.push(at);
        }
        Ok(Problem {
            m,
            vars,
            sides,
            runs,
        })
    }

    fn eval_side(&self, s: usize, values: &[Elem]) -> Elem {
        self.sides[s]
            .iter()
            .fold(self.m.identity(), |acc, &v| self.m.mul(acc, values[v]))
    }

    fn run_is_zero(&self, s: usize, (a, b): (usize, usize), values: &[Elem], zero: Elem) -> bool {
        let mut acc = self.m.identity();
        for &v in &self.sides[s][a..b] {
            acc = self.m.mul(acc, values[v]);
            if acc == zero {
                return true;
            }
        }
        false
    }

    /// Count of agreeing assignments, or the first disagreeing one.
    fn exhaustive(&self) -> std::result::Result<u128, Vec<Elem>> {
        let k = self.vars.len();
        let size = self.m.size() as Elem;
        if k == 0 {
            let values = Vec::new();
            return if self.eval_side(0, &values) == self.eval_side(1, &values) {
                Ok(1)
            } else {
                Err(values)
            };
        }
        let best = AtomicUsize::new(usize::MAX);
        let results: Vec<std::result::Result<u128, Vec<Elem>>> = (0..size)
            .into_par_iter()
            .map(|first| {
                let mut values = vec![UNSET; k];
                values[0] = first;
                let mut count = 0u128;
                let dead = self.update_dead([false, false], 1, &values);
                match self.dfs(1, dead, &mut values, &mut count, first as usize, &best) {
                    Some(()) => {
                        best.fetch_min(first as usize, Ordering::Relaxed);
                        Err(values)
                    }
                    None => Ok(count),
                }
            })
            .collect();
        let mut total = 0;
        for r in results {
            total += r?;
        }
        Ok(total)
    }

    fn update_dead(&self, mut dead: [bool; 2], depth: usize, values: &[Elem]) -> [bool; 2] {
        if let Some(z) = self.m.zero() {
            for s in 0..2 {
                if !dead[s] {
                    dead[s] = self.runs[depth][s]
                        .iter()
                        .any(|&r| self.run_is_zero(s, r, values, z));
                }
            }
        }
        dead
    }

    /// Returns `Some(())` with `values` holding a counterexample.
    fn dfs(
        &self,
        depth: usize,
        dead: [bool; 2],
        values: &mut [Elem],
        count: &mut u128,
        branch: usize,
        best: &AtomicUsize,
    ) -> Option<()> {
        let k = self.vars.len();
        let size = self.m.size() as u128;
        if dead[0] && dead[1] {
            // both sides are zero whatever the remaining letters are
            *count += size.pow((k - depth) as u32);
            return None;
        }
        if depth == k {
            *count += 1;
            return (self.eval_side(0, values) != self.eval_side(1, values)).then_some(());
        }
        if best.load(Ordering::Relaxed) < branch {
            // an earlier branch already holds the canonical answer
            return None;
        }
        for x in 0..self.m.size() as Elem {
            values[depth] = x;
            let d = self.update_dead(dead, depth + 1, values);
            if self
                .dfs(depth + 1, d, values, count, branch, best)
                .is_some()
            {
                return Some(());
            }
        }
        values[depth] = UNSET;
        None
    }

    /// First disagreeing sample in (chunk, position) order.
    fn randomized(&self, samples: u64, seed: u64) -> Option<Vec<Elem>> {
        let k = self.vars.len();
        let size = self.m.size() as Elem;
        let chunks = samples.div_ceil(CHUNK);
        let best = AtomicUsize::new(usize::MAX);
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                if best.load(Ordering::Relaxed) < c as usize {
                    return None;
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(c);
                let n = CHUNK.min(samples - c * CHUNK);
                let mut values = vec![0; k];
                for _ in 0..n {
                    for v in values.iter_mut() {
                        *v = rng.gen_range(0..size);
                    }
                    if self.eval_side(0, &values) != self.eval_side(1, &values) {
                        best.fetch_min(c as usize, Ordering::Relaxed);
                        return Some(values);
                    }
                }
                None
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .next()
    }
}
