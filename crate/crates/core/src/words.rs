//! Words over an integer alphabet, substitutions and the word families used
//! throughout the crate (Zimin words, `w_n` and `w'_n`).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// First id used for letters that are not of the form `x<i>`.
pub const NAMED_BASE: u32 = 1 << 24;

/// A letter, identified by a non-negative integer.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Letter(pub u32);

impl Letter {
    pub const Y: Letter = Letter(NAMED_BASE);
    pub const Z: Letter = Letter(NAMED_BASE + 1);

    /// The indexed letter `x<i>`.
    pub const fn x(i: u32) -> Letter {
        Letter(i)
    }

    pub fn id(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Letter::Y => write!(f, "y"),
            Letter::Z => write!(f, "z"),
            Letter(i) if i < NAMED_BASE => write!(f, "x{i}"),
            Letter(i) => write!(f, "v{}", i - NAMED_BASE),
        }
    }
}

/// A finite word. The empty word stands for the identity element.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Word over the indexed letters `x<i>`.
    pub fn from_ids(ids: &[u32]) -> Self {
        Word(ids.iter().map(|&i| Letter(i)).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Letter> + '_ {
        self.0.iter().copied()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn pow(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }

    /// Letters with at least one occurrence.
    pub fn content(&self) -> BTreeSet<Letter> {
        self.0.iter().copied().collect()
    }

    pub fn occurrences(&self, letter: Letter) -> usize {
        self.0.iter().filter(|&&l| l == letter).count()
    }

    fn counts(&self) -> BTreeMap<Letter, usize> {
        let mut counts = BTreeMap::new();
        for &l in &self.0 {
            *counts.entry(l).or_insert(0) += 1;
        }
        counts
    }

    /// Letters occurring exactly once (the linear letters).
    pub fn simple_letters(&self) -> BTreeSet<Letter> {
        self.counts()
            .into_iter()
            .filter(|&(_, c)| c == 1)
            .map(|(l, _)| l)
            .collect()
    }

    /// Letters occurring at least twice.
    pub fn non_simple_letters(&self) -> BTreeSet<Letter> {
        self.counts()
            .into_iter()
            .filter(|&(_, c)| c > 1)
            .map(|(l, _)| l)
            .collect()
    }

    pub fn head(&self) -> Result<Letter> {
        self.0.first().copied().ok_or(Error::EmptyWord("head"))
    }

    pub fn tail(&self) -> Result<Letter> {
        self.0.last().copied().ok_or(Error::EmptyWord("tail"))
    }

    /// The subsequence keeping exactly the letters in `keep`.
    pub fn restrict(&self, keep: &BTreeSet<Letter>) -> Word {
        Word(
            self.0
                .iter()
                .copied()
                .filter(|l| keep.contains(l))
                .collect(),
        )
    }

    /// The contiguous block `self[start..start + len]`.
    pub fn factor(&self, start: usize, len: usize) -> Word {
        Word(self.0[start..start + len].to_vec())
    }

    /// Start positions of every occurrence of `u` as a contiguous block.
    pub fn factor_positions(&self, u: &Word) -> Vec<usize> {
        if u.len() > self.len() {
            return Vec::new();
        }
        (0..=self.len() - u.len())
            .filter(|&i| self.0[i..i + u.len()] == u.0[..])
            .collect()
    }

    pub fn has_factor(&self, u: &Word) -> bool {
        is_factor(u, self)
    }

    /// True iff no nonempty `p` has `pp` as a factor.
    pub fn is_squarefree(&self) -> bool {
        let n = self.len();
        for half in 1..=n / 2 {
            for start in 0..=n - 2 * half {
                if self.0[start..start + half] == self.0[start + half..start + 2 * half] {
                    return false;
                }
            }
        }
        true
    }

    /// The letter of maximal id, with its number of occurrences.
    pub fn max_letter_occurrences(&self) -> Result<(Letter, usize)> {
        let max = self
            .0
            .iter()
            .copied()
            .max()
            .ok_or(Error::EmptyWord("max_letter_occurrences"))?;
        Ok((max, self.occurrences(max)))
    }

    /// All distinct nonempty factors, in order of first occurrence by length.
    pub fn distinct_factors(&self) -> Vec<Word> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for len in 1..=self.len() {
            for start in 0..=self.len() - len {
                let f = &self.0[start..start + len];
                if seen.insert(f.to_vec()) {
                    out.push(Word(f.to_vec()));
                }
            }
        }
        out
    }

    /// Shortlex comparison: shorter words first, then lexicographic by id.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// True iff `u` occurs as a contiguous block of `w`. The empty word is a
/// factor of every word.
pub fn is_factor(u: &Word, w: &Word) -> bool {
    if u.is_empty() {
        return true;
    }
    u.len() <= w.len() && w.0.windows(u.len()).any(|win| win == &u.0[..])
}

/// Zimin word: `z_0 = x0`, `z_{n+1} = z_n x_{n+1} z_n`.
pub fn zimin(n: u32) -> Word {
    let mut w = vec![Letter::x(0)];
    for i in 1..=n {
        let mut next = Vec::with_capacity(2 * w.len() + 1);
        next.extend_from_slice(&w);
        next.push(Letter::x(i));
        next.extend_from_slice(&w);
        w = next;
    }
    Word(w)
}

fn check_wn_index(n: u32) -> Result<()> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "w_n requires an odd n >= 3, got {n}"
        )));
    }
    Ok(())
}

fn alternating_word(n: u32, first: Letter, second: Letter) -> Word {
    // x1 s x2 s' ... xn s x1 s' ... s xn with separators alternating,
    // starting from `first`.
    let mut out = Vec::with_capacity(4 * n as usize - 1);
    let xs = (1..=n).chain(1..=n);
    for (k, i) in xs.enumerate() {
        if k > 0 {
            out.push(if k % 2 == 1 { first } else { second });
        }
        out.push(Letter::x(i));
    }
    Word(out)
}

/// `w_n = x1 y x2 z ... xn y x1 z x2 y ... y xn` for odd `n >= 3`.
pub fn w_n(n: u32) -> Result<Word> {
    check_wn_index(n)?;
    Ok(alternating_word(n, Letter::Y, Letter::Z))
}

/// `w_n` with `y` and `z` exchanged.
pub fn w_n_prime(n: u32) -> Result<Word> {
    check_wn_index(n)?;
    Ok(alternating_word(n, Letter::Z, Letter::Y))
}

/// A map from letters to words. Letters outside the domain map to
/// themselves; an empty image sends a letter to the identity.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Substitution {
    map: BTreeMap<Letter, Word>,
}

impl Substitution {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Letter, Word)>>(pairs: I) -> Self {
        Substitution {
            map: pairs.into_iter().collect(),
        }
    }

    pub fn insert(&mut self, letter: Letter, image: Word) {
        self.map.insert(letter, image);
    }

    pub fn image(&self, letter: Letter) -> Word {
        self.map
            .get(&letter)
            .cloned()
            .unwrap_or_else(|| Word(vec![letter]))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Letter, &Word)> {
        self.map.iter()
    }

    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Vec::new();
        for &l in &w.0 {
            match self.map.get(&l) {
                Some(img) => out.extend_from_slice(&img.0),
                None => out.push(l),
            }
        }
        Word(out)
    }
}

pub fn apply_substitution(theta: &Substitution, w: &Word) -> Word {
    theta.apply(w)
}

/// Bidirectional mapping between letter names and ids.
///
/// `x<i>` is always letter `i`, `y` and `z` are [`Letter::Y`] and
/// [`Letter::Z`]; any other name is interned on first use.
#[derive(Clone, Debug, Default)]
pub struct NameTable {
    by_name: HashMap<String, Letter>,
    by_letter: HashMap<Letter, String>,
    next: u32,
}

impl NameTable {
    pub fn new() -> Self {
        NameTable {
            next: NAMED_BASE + 2,
            ..Default::default()
        }
    }

    fn builtin(name: &str) -> Option<Letter> {
        match name {
            "y" => Some(Letter::Y),
            "z" => Some(Letter::Z),
            _ => {
                let digits = name.strip_prefix('x')?;
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return None;
                }
                if digits.len() > 1 && digits.starts_with('0') {
                    return None;
                }
                digits
                    .parse::<u32>()
                    .ok()
                    .filter(|&i| i < NAMED_BASE)
                    .map(Letter)
            }
        }
    }

    /// Letter for `name`, interning it if needed.
    pub fn letter(&mut self, name: &str) -> Letter {
        if let Some(l) = Self::builtin(name) {
            return l;
        }
        if let Some(&l) = self.by_name.get(name) {
            return l;
        }
        let l = Letter(self.next);
        self.next += 1;
        self.by_name.insert(name.to_string(), l);
        self.by_letter.insert(l, name.to_string());
        l
    }

    pub fn lookup(&self, name: &str) -> Option<Letter> {
        Self::builtin(name).or_else(|| self.by_name.get(name).copied())
    }

    pub fn name(&self, letter: Letter) -> String {
        self.by_letter
            .get(&letter)
            .cloned()
            .unwrap_or_else(|| letter.to_string())
    }

    /// Parses whitespace-separated letter names. `1` or an empty string is
    /// the empty word.
    pub fn parse_word(&mut self, s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::empty());
        }
        let mut out = Vec::new();
        for tok in s.split_whitespace() {
            if !tok.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::Parse(format!("invalid letter name {tok:?}")));
            }
            out.push(self.letter(tok));
        }
        Ok(Word(out))
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.iter().map(|l| self.name(l)).collect::<Vec<_>>().join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ls: &[Letter]) -> BTreeSet<Letter> {
        ls.iter().copied().collect()
    }

    fn xs(n: u32) -> BTreeSet<Letter> {
        (1..=n).map(Letter::x).collect()
    }

    #[test]
    fn content_and_simple_letters() {
        let w3 = w_n(3).unwrap();
        assert_eq!(
            w3.content(),
            set(&[
                Letter::x(1),
                Letter::x(2),
                Letter::x(3),
                Letter::Y,
                Letter::Z
            ])
        );
        assert!(w3.simple_letters().is_empty());
        assert!(Word::empty().content().is_empty());
        assert!(Word::empty().simple_letters().is_empty());
        let xx = Word::from_ids(&[0, 0]);
        assert_eq!(xx.content(), set(&[Letter::x(0)]));
        let xyx = Word::new(vec![Letter::x(0), Letter::Y, Letter::x(0)]);
        assert_eq!(xyx.simple_letters(), set(&[Letter::Y]));
        assert_eq!(xyx.non_simple_letters(), set(&[Letter::x(0)]));
    }

    #[test]
    fn head_and_tail() {
        let w3 = w_n(3).unwrap();
        assert_eq!(w3.head().unwrap(), Letter::x(1));
        assert_eq!(w3.tail().unwrap(), Letter::x(3));
        let x = Word::from_ids(&[4]);
        assert_eq!(x.head().unwrap(), x.tail().unwrap());
        let ab = Word::from_ids(&[1, 2]);
        assert_eq!(ab.head().unwrap(), Letter::x(1));
        assert_eq!(ab.tail().unwrap(), Letter::x(2));
        assert!(matches!(Word::empty().head(), Err(Error::EmptyWord(_))));
        assert!(matches!(Word::empty().tail(), Err(Error::EmptyWord(_))));
    }

    #[test]
    fn w3_spelled_out() {
        let y = Letter::Y;
        let z = Letter::Z;
        let x = Letter::x;
        let expected = Word::new(vec![x(1), y, x(2), z, x(3), y, x(1), z, x(2), y, x(3)]);
        assert_eq!(w_n(3).unwrap(), expected);
        let expected_prime = Word::new(vec![x(1), z, x(2), y, x(3), z, x(1), y, x(2), z, x(3)]);
        assert_eq!(w_n_prime(3).unwrap(), expected_prime);
    }

    #[test]
    fn wn_restrictions() {
        for n in [3u32, 5, 7, 9, 11] {
            let w = w_n(n).unwrap();
            assert_eq!(w.len(), 4 * n as usize - 1);
            let base: Word = (1..=n).map(Letter::x).collect();
            assert_eq!(w.restrict(&xs(n)), base.pow(2));
            let yz = Word::new(vec![Letter::Y, Letter::Z]);
            let mut expected = yz.pow(n as usize - 1);
            expected.push(Letter::Y);
            assert_eq!(w.restrict(&set(&[Letter::Y, Letter::Z])), expected);
        }
        assert_eq!(w_n(3).unwrap().restrict(&BTreeSet::new()), Word::empty());
    }

    #[test]
    fn wn_rejects_bad_indices() {
        for n in [0u32, 1, 2, 4, 6] {
            assert!(w_n(n).is_err());
            assert!(w_n_prime(n).is_err());
        }
    }

    #[test]
    fn zimin_words() {
        assert_eq!(zimin(0), Word::from_ids(&[0]));
        assert_eq!(zimin(2), Word::from_ids(&[0, 1, 0, 2, 0, 1, 0]));
        assert_eq!(zimin(4).len(), 31);
        for n in 0..10 {
            assert_eq!(zimin(n).len(), (1usize << (n + 1)) - 1);
        }
    }

    #[test]
    fn factor_tests() {
        assert!(is_factor(&Word::from_ids(&[0, 2, 0]), &zimin(2)));
        assert!(!is_factor(&Word::from_ids(&[0, 0]), &zimin(5)));
        assert!(is_factor(&Word::empty(), &zimin(3)));
        assert!(is_factor(&Word::empty(), &Word::empty()));
        assert!(!is_factor(&Word::from_ids(&[0]), &Word::empty()));
        assert_eq!(
            zimin(2).factor_positions(&Word::from_ids(&[0, 1])),
            vec![0, 4]
        );
    }

    #[test]
    fn substitution_examples() {
        let mut names = NameTable::new();
        let w = names.parse_word("a b s a b").unwrap();
        let (a, b, s) = (names.letter("a"), names.letter("b"), names.letter("s"));
        let theta = Substitution::from_pairs([
            (a, Word::from_ids(&[0])),
            (b, Word::from_ids(&[1, 0])),
            (s, Word::from_ids(&[2])),
        ]);
        assert_eq!(theta.apply(&w), zimin(2));
        assert_eq!(Substitution::identity().apply(&w), w);
        let xyx = Word::new(vec![Letter::x(0), Letter::Y, Letter::x(0)]);
        let erase = Substitution::from_pairs([(Letter::x(0), Word::empty())]);
        assert_eq!(erase.apply(&xyx), Word::new(vec![Letter::Y]));
    }

    #[test]
    fn squarefree_examples() {
        for n in [3, 5, 7] {
            assert!(w_n(n).unwrap().is_squarefree());
        }
        assert!(!Word::from_ids(&[0, 0]).is_squarefree());
        assert!(!Word::from_ids(&[0, 1, 0, 1]).is_squarefree());
        assert!(Word::empty().is_squarefree());
    }

    #[test]
    fn max_letter_examples() {
        assert_eq!(
            Word::from_ids(&[0, 1, 0]).max_letter_occurrences().unwrap(),
            (Letter::x(1), 1)
        );
        assert_eq!(
            Word::from_ids(&[0, 2, 0, 1])
                .max_letter_occurrences()
                .unwrap(),
            (Letter::x(2), 1)
        );
        assert!(Word::empty().max_letter_occurrences().is_err());
    }

    #[test]
    fn name_table_round_trip() {
        let mut names = NameTable::new();
        let w = names.parse_word("x1 y x2 z").unwrap();
        assert_eq!(
            w,
            Word::new(vec![Letter::x(1), Letter::Y, Letter::x(2), Letter::Z])
        );
        assert_eq!(names.format_word(&w), "x1 y x2 z");
        let t = names.parse_word("a  b a").unwrap();
        assert_eq!(names.format_word(&t), "a b a");
        assert_eq!(names.parse_word("1").unwrap(), Word::empty());
        assert!(names.parse_word("x1 (y)").is_err());
        // x01 is not the indexed letter x1
        assert_ne!(names.letter("x01"), Letter::x(1));
    }
}
