use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finmon::Identity;
use crate::words::{zimin, Letter, NameTable, Substitution, Word};

/// Same content and no letter occurring once on either side.
pub fn zimin_criterion(u: &Word, v: &Word) -> bool {
    u.content() == v.content() && u.simple_letters().is_empty() && v.simple_letters().is_empty()
}

/// Replaces the occurrence of `θ(lhs)` at `position` by `θ(rhs)`.
pub fn rewrite_step(
    w: &Word,
    id: &Identity,
    position: usize,
    theta: &Substitution,
) -> Result<Word> {
    let from = theta.apply(&id.lhs);
    if position + from.len() > w.len() || w.factor(position, from.len()) != from {
        return Err(Error::RewriteMismatch(position));
    }
    let mut out = w.factor(0, position);
    out.extend_from(&theta.apply(&id.rhs));
    out.extend_from(&w.factor(position + from.len(), w.len() - position - from.len()));
    Ok(out)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Application {
    pub position: usize,
    pub theta: Substitution,
    /// `θ(lhs) ≠ θ(rhs)`, so the step changes the word.
    pub nontrivial: bool,
}

struct Matcher<'a> {
    w: &'a [Letter],
    lhs: &'a [Letter],
    max: usize,
    budget: u64,
    nodes: u64,
}

impl Matcher<'_> {
    fn go(
        &mut self,
        i: usize,
        at: usize,
        images: &mut BTreeMap<Letter, (usize, usize)>,
        out: &mut Vec<BTreeMap<Letter, (usize, usize)>>,
    ) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget {
                what: "rewrite application search",
                needed: self.nodes as u128,
                budget: self.budget as u128,
                hint: "; lower max_image_len",
            });
        }
        if i == self.lhs.len() {
            out.push(images.clone());
            return Ok(());
        }
        let l = self.lhs[i];
        if let Some(&(s, len)) = images.get(&l) {
            if at + len <= self.w.len() && self.w[at..at + len] == self.w[s..s + len] {
                self.go(i + 1, at + len, images, out)?;
            }
            return Ok(());
        }
        for len in 0..=self.max.min(self.w.len() - at) {
            images.insert(l, (at, len));
            self.go(i + 1, at + len, images, out)?;
        }
        images.remove(&l);
        Ok(())
    }
}

/// Every `(position, θ)` with `|θ(x)| ≤ max_image_len` for the letters of
/// `lhs`, some image nonempty, and `θ(lhs)` a factor of `w` at `position`.
/// Letters only in `rhs` keep their identity image.
pub fn find_rewrite_applications(
    w: &Word,
    id: &Identity,
    max_image_len: usize,
) -> Result<Vec<Application>> {
    let letters = w.letters();
    let mut out = Vec::new();
    for position in 0..=letters.len() {
        let mut found = Vec::new();
        let mut m = Matcher {
            w: letters,
            lhs: id.lhs.letters(),
            max: max_image_len,
            budget: 50_000_000,
            nodes: 0,
        };
        m.go(0, position, &mut BTreeMap::new(), &mut found)?;
        for images in found {
            if images.values().all(|&(_, len)| len == 0) {
                continue;
            }
            let theta = Substitution::from_pairs(
                images
                    .iter()
                    .map(|(&l, &(s, len))| (l, Word::new(letters[s..s + len].to_vec()))),
            );
            let nontrivial = theta.apply(&id.lhs) != theta.apply(&id.rhs);
            out.push(Application {
                position,
                theta,
                nontrivial,
            });
        }
    }
    Ok(out)
}

/// Checks that `θ` has nonempty images on the letters of `w` and that
/// `θ(w)` is a factor of `z_n`.
pub fn verify_realization(w: &Word, theta: &Substitution, n: u32) -> bool {
    w.content().into_iter().all(|l| !theta.image(l).is_empty())
        && zimin(n).has_factor(&theta.apply(w))
}

/// Searches substitutions with nonempty images of length at most
/// `max_image_len` sending `w` to a factor of `z_n`. Images are tried in
/// shortlex order, letters in order of first occurrence.
pub fn zimin_realization(w: &Word, n: u32, max_image_len: usize) -> Result<Option<Substitution>> {
    let z = zimin(n);
    let mut factors: Vec<Word> = z
        .distinct_factors()
        .into_iter()
        .filter(|f| f.len() <= max_image_len)
        .collect();
    factors.sort_by(|a, b| a.shortlex_cmp(b));
    let mut order = Vec::new();
    for l in w.iter() {
        if !order.contains(&l) {
            order.push(l);
        }
    }
    let budget = (factors.len() as u128)
        .checked_pow(order.len() as u32)
        .unwrap_or(u128::MAX);
    if budget > 1_000_000_000 {
        return Err(Error::Budget {
            what: "Zimin realization search",
            needed: budget,
            budget: 1_000_000_000,
            hint: "; lower max_image_len or n",
        });
    }
    fn rec(
        w: &Word,
        z: &Word,
        order: &[Letter],
        factors: &[Word],
        theta: &mut Substitution,
        k: usize,
    ) -> bool {
        // image of the longest prefix of w over assigned letters
        let assigned = &order[..k];
        let mut prefix = Word::empty();
        for l in w.iter() {
            if !assigned.contains(&l) {
                break;
            }
            prefix.extend_from(&theta.image(l));
        }
        if !z.has_factor(&prefix) {
            return false;
        }
        if k == order.len() {
            return true;
        }
        for f in factors {
            theta.insert(order[k], f.clone());
            if rec(w, z, order, factors, theta, k + 1) {
                return true;
            }
        }
        false
    }
    let mut theta = Substitution::identity();
    Ok(rec(w, &z, &order, &factors, &mut theta, 0).then_some(theta))
}

/// A substitution realizing an isoterm family member inside a Zimin word.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RealizationFixture {
    pub case: String,
    pub word: String,
    pub n: u32,
    pub theta: BTreeMap<String, String>,
    pub image: String,
    /// The image is all of `z_n` rather than a factor.
    #[serde(default)]
    pub whole: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixtureCheck {
    pub case: String,
    pub image_matches: bool,
    pub is_factor: bool,
    pub whole: bool,
}

const FIXTURES: &str = include_str!("../../data/isoterm_fixtures.json");

pub fn realization_fixtures() -> Result<Vec<RealizationFixture>> {
    Ok(serde_json::from_str(FIXTURES)?)
}

/// Replays a stored substitution: the image equals the recorded word and
/// lies in `z_n` (as the whole word when so recorded).
pub fn check_fixture(f: &RealizationFixture) -> Result<FixtureCheck> {
    let mut names = NameTable::new();
    let w = names.parse_word(&f.word)?;
    let mut theta = Substitution::identity();
    for (k, v) in &f.theta {
        let l = names.letter(k);
        theta.insert(l, names.parse_word(v)?);
    }
    let image = theta.apply(&w);
    let expected = names.parse_word(&f.image)?;
    let z = zimin(f.n);
    Ok(FixtureCheck {
        case: f.case.clone(),
        image_matches: image == expected,
        is_factor: verify_realization(&w, &theta, f.n),
        whole: !f.whole || image == z,
    })
}
